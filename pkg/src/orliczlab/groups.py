"""Ascending chains of finite groups and measure-only shell models.

A chain K_1 <= K_2 <= ... of finite groups with a common element encoding
is the desk-scale stand-in for a locally compact group that is an increasing
union of compact open subgroups.  Elements are opaque hashable values; each
concrete chain provides mul/inv/identity, per-level enumeration in a fixed
canonical order (elements(i) is always a prefix of elements(i+1)), and exact
Haar bookkeeping as Fractions.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

ENUM_CAP = 2 ** 20     # max elements per fully enumerated level
DENSE_CAP = 2048       # max level size for cached pair tables / dense matrices


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class SizeError(ValidationError):
    """Raised when a construction or enumeration exceeds its size cap."""


@dataclass(frozen=True)
class HaarMeasure:
    """Haar normalization: every element carries the same point mass."""

    point_mass: Fraction
    kind: str  # 'normalized' (mu(K_1) = 1) or 'counting' (mass 1)

    @property
    def m(self):
        return float(self.point_mass)


class GroupChain:
    """Common interface for materialized chains K_1 <= ... <= K_L.

    Levels are 1-based.  ``sizes[i-1] = |K_i|`` is known for every level;
    full enumeration may stop earlier (lazy deep levels support mul/inv/level
    but not elements()).  Instances are immutable after construction and safe
    to share across workers.
    """

    def __init__(self, sizes, haar, enumerated_levels):
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValidationError("chain needs at least one level")
        for i in range(1, len(sizes)):
            if sizes[i] % sizes[i - 1] != 0 or sizes[i] // sizes[i - 1] < 2:
                raise ValidationError(
                    f"index [K_{i + 1}:K_{i}] = {sizes[i]}/{sizes[i - 1]} "
                    "is not an integer >= 2")
        self._sizes = sizes
        self.haar = haar
        self.enumerated_levels = enumerated_levels
        self._pair_tables = {}

    # -- structure ---------------------------------------------------------

    @property
    def levels(self):
        return len(self._sizes)

    @property
    def sizes(self):
        return self._sizes

    def size(self, i):
        return self._sizes[i - 1]

    @property
    def indices(self):
        """Exact subgroup indices ([K_{i+1}:K_i])_i."""
        return tuple(self._sizes[i] // self._sizes[i - 1]
                     for i in range(1, len(self._sizes)))

    def measure(self, i):
        """mu(K_i) under this chain's Haar normalization, exact."""
        return self.haar.point_mass * self.size(i)

    def level_of_size_position(self, pos):
        # smallest i with pos < |K_i|; positions follow canonical order
        return bisect.bisect_right(self._sizes, pos) + 1

    # -- group operations (implemented by subclasses) -----------------------

    identity = None

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def level(self, x):
        raise NotImplementedError

    def elements(self, i):
        """Canonically ordered carrier of K_i (prefix of elements(i+1))."""
        raise NotImplementedError

    def element_index(self, x):
        """Position of x in the canonical enumeration order."""
        raise NotImplementedError

    def element_at(self, pos):
        raise NotImplementedError

    @property
    def generators(self):
        raise NotImplementedError

    def power(self, x, n):
        """x^n by repeated squaring (n >= 0)."""
        acc, base = self.identity, x
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    # -- cached pair tables for dense linear algebra ------------------------

    def _require_enumerated(self, i):
        if i > self.enumerated_levels:
            raise SizeError(
                f"level {i} is lazy (|K_{i}| = {self.size(i)}); "
                "enumeration is unavailable")

    def random_element(self, i, rng):
        """Uniform random element of K_i (works on lazy levels too)."""
        raise NotImplementedError

    def pair_table(self, i, kind):
        """int32 table over K_i; kind 'conv' gives T[y,x] = pos(y^-1 x),
        kind 'rep' gives T[x,y] = pos(x y^-1), kind 'mul' T[x,y] = pos(xy)."""
        self._require_enumerated(i)
        if self.size(i) > DENSE_CAP:
            raise SizeError(
                f"|K_{i}| = {self.size(i)} exceeds dense cap {DENSE_CAP}")
        key = (i, kind)
        if key not in self._pair_tables:
            self._pair_tables[key] = self._build_pair_table(i, kind)
        return self._pair_tables[key]

    def _build_pair_table(self, i, kind):
        # generic fallback; subclasses override with vectorized versions
        elems = list(self.elements(i))
        n = len(elems)
        tab = np.empty((n, n), dtype=np.int32)
        for a, x in enumerate(elems):
            xi = self.inv(x)
            for b, y in enumerate(elems):
                if kind == "conv":
                    z = self.mul(xi, y)       # tab[y, x] = pos(inv(y) x)
                elif kind == "rep":
                    z = self.mul(y, xi)       # tab.T[x, y] = pos(x inv(y))
                else:
                    z = self.mul(x, y)        # tab[x, y] = pos(x y)
                tab[a, b] = self.element_index(z)
        if kind == "rep":
            return tab.T
        return tab


def _haar(kind, k1_size):
    if kind == "normalized":
        return HaarMeasure(Fraction(1, k1_size), "normalized")
    if kind == "counting":
        return HaarMeasure(Fraction(1), "counting")
    raise ValidationError(f"unknown Haar kind {kind!r}")


class CyclicSumChain(GroupChain):
    """K_i = C_{orders[0]} x ... x C_{orders[i-1]} with coordinatewise sum.

    Elements are mixed-radix integers: the element with digits (m_1, ..., m_d)
    has id sum(m_j * prod(orders[:j-1])).  K_i is then exactly the id range
    [0, |K_i|), so enumeration order is the identity map.
    """

    def __init__(self, orders, depth=None, normalization="normalized",
                 lazy=False, enum_cap=ENUM_CAP):
        orders = tuple(int(o) for o in orders)
        if depth is None:
            depth = len(orders)
        if depth < 1 or depth > len(orders):
            raise ValidationError("depth must be in 1..len(orders)")
        orders = orders[:depth]
        if any(o < 1 for o in orders):
            raise ValidationError("cyclic factor orders must be >= 1")
        sizes, s = [], 1
        for o in orders:
            s *= o
            sizes.append(s)
        # drop leading duplicate sizes produced by order-1 factors: K_i must
        # properly increase, but a trivial leading block is legitimate
        level_sizes = []
        for s in sizes:
            if not level_sizes or s > level_sizes[-1]:
                level_sizes.append(s)
            elif s == level_sizes[-1]:
                continue
        if len(level_sizes) != len([s for s in sizes if True]) and any(
                sizes[i] == sizes[i - 1] for i in range(1, len(sizes))
                if sizes[i - 1] > 1):
            raise ValidationError(
                "order-1 factors are only allowed as a leading block")
        if not lazy and level_sizes[-1] > enum_cap:
            raise SizeError(
                f"|K_depth| = {level_sizes[-1]} exceeds enumeration cap "
                f"{enum_cap}; pass lazy=True for multiplication-only levels")
        enumerated = 0
        for s in level_sizes:
            if s <= enum_cap:
                enumerated += 1
        self.orders = orders
        self._radices = []
        r = 1
        for o in orders:
            self._radices.append(r)
            r *= o
        super().__init__(level_sizes, _haar(normalization, level_sizes[0]),
                         enumerated)
        self.identity = 0

    # mixed-radix digit helpers -------------------------------------------

    def digits(self, x):
        out = []
        for o in self.orders:
            out.append(x % o)
            x //= o
        return tuple(out)

    def from_digits(self, digs):
        x = 0
        for d, r, o in zip(digs, self._radices, self.orders):
            if not 0 <= d < o:
                raise ValidationError(f"digit {d} out of range for order {o}")
            x += d * r
        return x

    def mul(self, x, y):
        z, r = 0, 1
        for o in self.orders:
            z += ((x + y) % o) * r
            x //= o
            y //= o
            r *= o
        return z

    def inv(self, x):
        z, r = 0, 1
        for o in self.orders:
            z += (-x % o) * r
            x //= o
            r *= o
        return z

    def level(self, x):
        return self.level_of_size_position(x)

    def elements(self, i):
        self._require_enumerated(i)
        return range(self.size(i))

    def element_index(self, x):
        return x

    def element_at(self, pos):
        return pos

    @property
    def generators(self):
        """Canonical generators x_j of each nontrivial cyclic factor."""
        return tuple(self._radices[j] for j, o in enumerate(self.orders)
                     if o >= 2)

    def generator(self, j):
        """Generator of the C_{orders[j-1]} factor (1-based j)."""
        o = self.orders[j - 1]
        if o < 2:
            raise ValidationError(f"factor {j} is trivial")
        return self._radices[j - 1]

    def _digit_matrix(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        cols = []
        for o, r in zip(self.orders, self._radices):
            cols.append((ids // r) % o)
        return np.stack(cols, axis=1)

    def random_element(self, i, rng):
        return int(rng.integers(0, self.size(i)))

    def _build_pair_table(self, i, kind):
        ids = np.arange(self.size(i), dtype=np.int64)
        D = self._digit_matrix(ids)  # (n, d)
        ords = np.asarray(self.orders, dtype=np.int64)
        rad = np.asarray(self._radices, dtype=np.int64)
        if kind == "mul":
            s = (D[:, None, :] + D[None, :, :]) % ords  # [x, y] = x + y
        else:
            # abelian: inv(y) x and x inv(y) coincide digitwise
            s = (D[None, :, :] - D[:, None, :]) % ords  # [y, x] = x - y
        tab = (s * rad).sum(axis=2).astype(np.int32)
        if kind == "rep":
            return tab.T
        return tab


class LeptinHulanickiChain(GroupChain):
    """K_i = (H_i -> H_i, pointwise product) semidirect H_i, H_i = C_2^i.

    H_i acts by translating function arguments.  Elements are pairs
    (h, n) with h an i-bit mask and n a tuple of 2^depth values (< 2^level);
    all reps are stored at the chain's full width, with K_i the subset whose
    data fits in i bits.  |K_i| = 2^(i 2^i + i).
    """

    def __init__(self, depth, normalization="normalized", lazy=False):
        if depth < 1:
            raise ValidationError("depth must be >= 1")
        if depth > 2 and not lazy:
            raise SizeError(
                "depth >= 3 chains are enumeration-free; pass lazy=True")
        sizes = [2 ** (i * 2 ** i + i) for i in range(1, depth + 1)]
        self.depth = depth
        self._width = 2 ** depth
        super().__init__(sizes, _haar(normalization, sizes[0]),
                         min(depth, 2))
        self.identity = (0, (0,) * self._width)
        self._order = {}       # rep -> canonical position
        self._by_pos = []
        for lvl in range(1, self.enumerated_levels + 1):
            block = sorted(self._level_reps(lvl) - set(self._by_pos))
            start = len(self._by_pos)
            for k, rep in enumerate(block):
                self._order[rep] = start + k
            self._by_pos.extend(block)

    def _level_reps(self, i):
        from itertools import product

        vals = range(2 ** i)
        reps = set()
        width = self._width
        for h in vals:
            for body in product(vals, repeat=2 ** i):
                n = tuple(body[x] if x < 2 ** i else 0 for x in range(width))
                reps.add((h, n))
        return reps

    def mul(self, a, b):
        h1, n1 = a
        h2, n2 = b
        w = self._width
        # (n1, h1)(n2, h2) = (n1 + h1.n2, h1 + h2); (h.n)(x) = n(x xor h)
        n = tuple(n1[x] ^ n2[x ^ h1] for x in range(w))
        return (h1 ^ h2, n)

    def inv(self, a):
        h, n = a
        w = self._width
        return (h, tuple(n[x ^ h] for x in range(w)))

    def level(self, a):
        h, n = a
        lvl = 1
        while True:
            cap = 2 ** lvl
            if h < cap and all(v < cap for v in n) and \
                    all(n[x] == 0 for x in range(cap, self._width)):
                return lvl
            lvl += 1
            if lvl > self.depth:
                raise ValidationError("element does not belong to the chain")

    def elements(self, i):
        self._require_enumerated(i)
        return self._by_pos[: self.size(i)]

    def element_index(self, x):
        return self._order[x]

    def element_at(self, pos):
        return self._by_pos[pos]

    @property
    def generators(self):
        """Translation-part bits plus point evaluations at the identity index;
        together these generate the wreath product."""
        gens = []
        w = self._width
        for j in range(self.depth):
            gens.append((1 << j, (0,) * w))
        for j in range(self.depth):
            n = [0] * w
            n[0] = 1 << j
            gens.append((0, tuple(n)))
        return tuple(gens)

    def random_element(self, i, rng):
        cap = 2 ** i
        h = int(rng.integers(0, cap))
        n = [int(rng.integers(0, cap)) if x < cap else 0
             for x in range(self._width)]
        return (h, tuple(n))

    def _build_pair_table(self, i, kind):
        elems = self.elements(i)
        n = len(elems)
        w = 2 ** i
        H = np.array([e[0] for e in elems], dtype=np.int64)
        N = np.array([e[1][:w] for e in elems], dtype=np.int64)  # (n, w)
        cols = np.arange(w, dtype=np.int64)
        Ninv = np.take_along_axis(N, cols[None, :] ^ H[:, None], axis=1)
        hout = H[:, None] ^ H[None, :]
        body = np.empty((n, n, w), dtype=np.int64)
        if kind == "conv":
            # row a = y: inv(y) x has body[c] = Ninv[y, c] ^ N[x, c ^ Hy]
            for a in range(n):
                body[a] = Ninv[a][None, :] ^ N[:, cols ^ H[a]]
        elif kind == "rep":
            # row a = x: x inv(y) has body[c] = N[x, c] ^ Ninv[y, c ^ Hx]
            for a in range(n):
                body[a] = N[a][None, :] ^ Ninv[:, cols ^ H[a]]
        else:
            # row a = x: x y has body[c] = N[x, c] ^ N[y, c ^ Hx]
            for a in range(n):
                body[a] = N[a][None, :] ^ N[:, cols ^ H[a]]
        codes = self._encode_codes(hout, body, i)
        lookup = np.full(2 ** (i + i * w), -1, dtype=np.int32)
        own = self._encode_codes(H, N, i)
        lookup[own] = np.arange(n, dtype=np.int32)
        tab = lookup[codes]
        assert (tab >= 0).all()
        return tab.astype(np.int32)

    @staticmethod
    def _encode_codes(h, body, i):
        codes = h.astype(np.int64).copy()
        w = body.shape[-1]
        for c in range(w):
            codes = codes | (body[..., c].astype(np.int64) << (i + i * c))
        return codes


class SubChain(GroupChain):
    """View of a base chain through a selected sub-sequence of levels."""

    def __init__(self, base, selected):
        if selected[0] != 1:
            raise ValidationError("a sub-chain must keep level 1")
        self.base = base
        self.selected = tuple(selected)
        enum = sum(1 for l in selected if l <= base.enumerated_levels)
        super().__init__([base.size(l) for l in selected], base.haar, enum)
        self.identity = base.identity

    def mul(self, x, y):
        return self.base.mul(x, y)

    def inv(self, x):
        return self.base.inv(x)

    def level(self, x):
        bl = self.base.level(x)
        return bisect.bisect_left(self.selected, bl) + 1

    def elements(self, i):
        return self.base.elements(self.selected[i - 1])

    def element_index(self, x):
        return self.base.element_index(x)

    def element_at(self, pos):
        return self.base.element_at(pos)

    def random_element(self, i, rng):
        return self.base.random_element(self.selected[i - 1], rng)

    @property
    def generators(self):
        return self.base.generators

    def _build_pair_table(self, i, kind):
        return self.base.pair_table(self.selected[i - 1], kind)


class ShellModel:
    """Measure-only model: subgroup indices with mu(K_1) = 1.

    ``tail_index`` extends the listed indices by a constant forever, in which
    case the bounded index property holds with bound max(indices + tail).
    """

    def __init__(self, indices, tail_index=None):
        indices = tuple(int(d) for d in indices)
        if any(d < 2 for d in indices):
            raise ValidationError("shell indices must be integers >= 2")
        if tail_index is not None and tail_index < 2:
            raise ValidationError("tail index must be >= 2")
        self.indices_head = indices
        self.tail_index = tail_index

    @property
    def bounded_index(self):
        return self.tail_index is not None

    @property
    def index_bound(self):
        vals = self.indices_head + (
            (self.tail_index,) if self.tail_index else ())
        return max(vals)

    def index(self, i):
        """[K_{i+1}:K_i] (1-based i)."""
        if i <= len(self.indices_head):
            return self.indices_head[i - 1]
        if self.tail_index is None:
            raise ValidationError(f"index {i} beyond the stored truncation")
        return self.tail_index

    def measure(self, i):
        m = Fraction(1)
        for j in range(1, i):
            m *= self.index(j)
        return m

    def shell_measure(self, i):
        if i == 1:
            return Fraction(1)
        return self.measure(i) - self.measure(i - 1)


# -- free functions of the module ------------------------------------------


def build_cyclic_sum(orders, depth=None, normalization="normalized",
                     lazy=False):
    """Chain K_i = C_{orders[1]} x ... x C_{orders[i]}; see CyclicSumChain."""
    return CyclicSumChain(orders, depth, normalization, lazy=lazy)


def build_leptin_hulanicki(depth, normalization="normalized", lazy=False):
    """Wreath-product chain of the class-2 solvable locally finite group."""
    return LeptinHulanickiChain(depth, normalization, lazy=lazy)


def standardize(chain):
    """Greedy sub-chain with non-decreasing indices.

    Indices multiply along a sub-chain, so from any level the next selected
    level can always be pushed far enough; when the finite truncation runs
    out, the remaining levels merge into the final step (which only grows
    the last index).
    """
    if chain.levels < 2:
        raise ValidationError("standardize needs at least 2 levels")
    sizes = chain.sizes
    selected = [1]
    last_index = 1
    while selected[-1] < chain.levels:
        cur = selected[-1]
        nxt = None
        for j in range(cur + 1, chain.levels + 1):
            if sizes[j - 1] // sizes[cur - 1] >= last_index:
                nxt = j
                break
        if nxt is None:
            # merge the unreachable tail into the final step
            selected[-1] = chain.levels
            if len(selected) >= 2:
                last_index = sizes[-1] // sizes[selected[-2] - 1]
            break
        selected.append(nxt)
        last_index = sizes[nxt - 1] // sizes[cur - 1]
    if len(selected) < 2:
        selected = [1, chain.levels]
    if isinstance(chain, SubChain):
        return SubChain(chain.base, [chain.selected[l - 1] for l in selected])
    return SubChain(chain, selected)


def shell_measures(model, upto=None):
    """(mu(K_1), mu(K_2 \\ K_1), ...) as exact Fractions."""
    if isinstance(model, ShellModel):
        n = upto or (len(model.indices_head) + 1)
        return tuple(model.shell_measure(i) for i in range(1, n + 1))
    n = upto or model.levels
    out = [model.measure(1)]
    for i in range(2, n + 1):
        out.append(model.measure(i) - model.measure(i - 1))
    return tuple(out)
