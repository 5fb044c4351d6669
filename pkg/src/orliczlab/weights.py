"""Weight constructions on group chains: radial weights, sharpened majorants,
variation, GRS sequences, integrability bookkeeping and the non-sub-additive
counterexample.

All constructed weights evaluate into [1, inf).  Radial weights are constant
on shells K_i \\ K_{i-1} and are the canonical representation; the lone
pointwise construction (the counterexample on the chain of cyclic groups) is
memoized per element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import zeta

from .groups import (CyclicSumChain, GroupChain, ShellModel,
                     ValidationError, shell_measures)


class Weight:
    """Weight on a chain or shell model.

    Radial mode stores one value per shell with a constant extension beyond
    the stored levels; pointwise mode wraps a callable on elements (memoized).
    Metadata records what has been certified, never more: a sub-additivity
    constant is set only when it is implied by the construction.
    """

    def __init__(self, model, shell_values=None, func=None, name="weight",
                 subadditive_constant=None, heuristic=False,
                 lq_tail_rule=None):
        if (shell_values is None) == (func is None):
            raise ValidationError("exactly one of shell_values/func required")
        self.model = model
        self.name = name
        self.heuristic = heuristic
        self.subadditive_constant = subadditive_constant
        self.lq_tail_rule = lq_tail_rule  # (q, L or None) -> certified bound
        self._func = func
        self._memo = {}
        if shell_values is not None:
            vals = tuple(float(v) for v in shell_values)
            if any(v < 1.0 for v in vals):
                raise ValidationError("weight values must be >= 1")
            self.shell_values_stored = vals
        else:
            self.shell_values_stored = None

    @property
    def is_radial(self):
        return self.shell_values_stored is not None

    def shell_value(self, i):
        """Value on the shell K_i \\ K_{i-1} (constant extension past store)."""
        if not self.is_radial:
            raise ValidationError(f"{self.name} is not radial")
        vals = self.shell_values_stored
        return vals[i - 1] if i <= len(vals) else vals[-1]

    def __call__(self, x):
        if self.is_radial:
            return self.shell_value(self.model.level(x))
        if x not in self._memo:
            v = float(self._func(x))
            if v < 1.0 - 1e-12:
                raise ValidationError(f"{self.name} dips below 1 at {x!r}")
            self._memo[x] = v
        return self._memo[x]

    def values_on(self, level):
        """Vector of values over elements(level) in canonical order."""
        chain = self.model
        if self.is_radial:
            sizes = chain.sizes
            out = np.empty(chain.size(level))
            lo = 0
            for i in range(1, level + 1):
                out[lo:sizes[i - 1]] = self.shell_value(i)
                lo = sizes[i - 1]
            return out
        return np.array([self(x) for x in chain.elements(level)])

    def __repr__(self):
        return f"Weight({self.name}, radial={self.is_radial})"


def trivial_weight(model):
    levels = model.levels if isinstance(model, GroupChain) else \
        len(model.indices_head) + 1
    return Weight(model, shell_values=(1.0,) * levels, name="one",
                  subadditive_constant=1.0)


def radial_weight(model, a, name="radial"):
    """Radial weight from a non-decreasing sequence a_i >= 1.

    Non-decreasing radial weights satisfy w(xy) <= max(w(x), w(y)), hence are
    sub-additive with constant 1.
    """
    a = tuple(float(v) for v in a)
    if any(x > y + 1e-15 for x, y in zip(a, a[1:])):
        raise ValidationError("radial weight values must be non-decreasing")
    return Weight(model, shell_values=a, name=name, subadditive_constant=1.0)


# -- sup-per-level machinery -------------------------------------------------

_SAMPLE_SUP = 10 ** 4


def _level_sup(omega, i, rng=None):
    """sup of omega over K_i: exact for radial or enumerated levels, sampled
    (flagged by the caller) on lazy levels."""
    chain = omega.model
    if omega.is_radial:
        return max(omega.shell_value(j) for j in range(1, i + 1)), True
    if i <= chain.enumerated_levels:
        return max(omega(x) for x in chain.elements(i)), True
    rng = rng or np.random.default_rng(0)
    best = max(omega(chain.random_element(i, rng))
               for _ in range(_SAMPLE_SUP))
    return best, False


def sharpen(omega):
    """Radial majorant w#: value on shell i is sup of omega over K_i.

    The sup sequence is non-decreasing, so the result is sub-additive with
    max-form constant 1; dominates omega pointwise on materialized levels.
    Idempotent on radial weights with non-decreasing values.
    """
    chain = omega.model
    vals, exact_all = [], True
    rng = np.random.default_rng(0)
    for i in range(1, chain.levels + 1):
        v, exact = _level_sup(omega, i, rng)
        vals.append(v)
        exact_all = exact_all and exact
    return Weight(chain, shell_values=vals, name=f"sharp[{omega.name}]",
                  subadditive_constant=1.0, heuristic=not exact_all)


def sharpen_p(omega, p):
    """The integrable majorant w#_p built from the level sups a_i.

    Shell values: (a_1 + 1) on K_1 and (a_i + i^2) mu(K_i \\ K_{i-1})^(1/q)
    beyond, q conjugate to p (q = 1 when p = 1).  Dominates w# pointwise, and
    the L^q integral of its inverse is 1/(a_1+1)^q + sum_i 1/(a_i+i^2)^q,
    bounded by 1/(a_1+1)^q + (zeta(2q) - 1).  Sub-additivity is certified
    only over a standard decomposition (non-decreasing indices).
    """
    p = float(p)
    if p < 1:
        raise ValidationError("sharpen_p requires p >= 1")
    q = 1.0 if p == 1.0 else p / (p - 1.0)
    sharp = sharpen(omega)
    a = sharp.shell_values_stored
    chain = omega.model
    mus = shell_measures(chain)
    vals = [a[0] + 1.0]
    for i in range(2, len(a) + 1):
        vals.append((a[i - 1] + i * i) * float(mus[i - 1]) ** (1.0 / q))
    standard = all(d1 <= d2 for d1, d2 in zip(chain.indices,
                                              chain.indices[1:]))

    a1 = a[0]

    def tail_rule(q_ask, upto=None):
        if abs(q_ask - q) > 1e-12:
            return None
        if upto is None:
            return 1.0 / (a1 + 1.0) ** q + (float(zeta(2.0 * q)) - 1.0)
        return 1.0 / (a1 + 1.0) ** q + sum(
            1.0 / i ** (2.0 * q) for i in range(2, upto + 1))

    w = Weight(chain, shell_values=vals, name=f"sharp_p[{omega.name},p={p}]",
               subadditive_constant=1.0 if standard else None,
               heuristic=sharp.heuristic, lq_tail_rule=tail_rule)
    w.q = q
    w.standard_decomposition = standard
    return w


def variation(omega, up_to_level):
    """Partial variation sup_{i<=L} (max_{K_i} omega - min_{K_i} omega)."""
    chain = omega.model
    worst = 0.0
    for i in range(1, up_to_level + 1):
        if omega.is_radial:
            mx = max(omega.shell_value(j) for j in range(1, i + 1))
            mn = min(omega.shell_value(j) for j in range(1, i + 1))
        else:
            chain._require_enumerated(i)
            vals = [omega(x) for x in chain.elements(i)]
            mx, mn = max(vals), min(vals)
        worst = max(worst, mx - mn)
    return worst


# -- GRS ---------------------------------------------------------------------


@dataclass
class GRSReport:
    """Partial realization of the spectral-radius condition for one element:
    the sequence w(x^n)^(1/n) together with the exact cyclic-subgroup sup C,
    which certifies every term is in [1, C^(1/n)]."""

    values: np.ndarray = field(repr=False)
    certificate: float
    order: int

    @property
    def within_bounds(self):
        n = np.arange(1, len(self.values) + 1)
        upper = self.certificate ** (1.0 / n)
        return bool(np.all(self.values >= 1.0)
                    and np.all(self.values <= upper))


def grs_sequence(omega, x, N, order_cap=10 ** 6):
    """(w(x^n)^(1/n))_{n<=N} plus the exact certificate C = max over <x>."""
    chain = omega.model
    cycle_vals = []
    y = x
    for _ in range(order_cap):
        cycle_vals.append(omega(y))
        y = chain.mul(y, x)
        if y == x:
            break
    else:
        raise ValidationError("order of x exceeds the cycle cap")
    # cycle_vals[k] = omega(x^(k+1)); x^order = identity
    order = len(cycle_vals)
    C = max(max(cycle_vals), omega(chain.identity))
    ns = np.arange(1, N + 1)
    vals = np.array([cycle_vals[(n - 1) % order] for n in ns])
    return GRSReport(vals ** (1.0 / ns), C, order)


class ZWeight:
    """Radial weight on the integer line: value depends on |n| only, with a
    constant extension beyond the stored range."""

    def __init__(self, values, name="zweight"):
        values = tuple(float(v) for v in values)
        if any(v < 1.0 for v in values):
            raise ValidationError("values must be >= 1")
        self.values = values
        self.name = name

    def __call__(self, n):
        k = abs(int(n))
        vals = self.values
        return vals[k] if k < len(vals) else vals[-1]

    def on_range(self, upto):
        return np.array([self(n) for n in range(upto + 1)])

    def submult_worst_ratio(self, upto):
        """max of w'(m+n) / (w'(m) w'(n)) over |m|, |n| <= upto; <= 1 means
        sub-multiplicative on the tested range (not guaranteed in general)."""
        v = self.on_range(2 * upto)
        worst = 0.0
        for a in range(upto + 1):
            for b in range(upto + 1):
                worst = max(worst, v[a + b] / (v[a] * v[b]))
        return worst


def uniform_grs_weight(omega):
    """The induced integer-line weight w'(n) = max over K_{|n|} of omega.

    The chain here is indexed from 1, so w'(0) is taken as the K_1 sup; the
    limit behaviour of w'(n)^(1/n) is unaffected.  Returns the ZWeight; its
    n-th root sequence over the materialized range is GRS evidence only, no
    finite computation certifies the condition.
    """
    chain = omega.model
    rng = np.random.default_rng(0)
    values = []
    for i in range(1, chain.levels + 1):
        v, _ = _level_sup(omega, i, rng)
        values.append(v)
    return ZWeight([values[0]] + values, name=f"uniform[{omega.name}]")


# -- integrability -----------------------------------------------------------


@dataclass
class LqReport:
    q: float
    partial_sums: np.ndarray = field(repr=False)
    bound: float | None
    verdict: str        # 'bounded-by-rule' or 'unknown'


def lq_membership(omega, q, L):
    """Partial sums S_L of the L^q integral of 1/omega over the first L
    shells, with a certified bound when the construction registered one."""
    if not omega.is_radial:
        raise ValidationError("lq_membership needs a radial weight")
    mus = shell_measures(omega.model, upto=L)
    terms = [float(mus[i - 1]) / omega.shell_value(i) ** q
             for i in range(1, L + 1)]
    sums = np.cumsum(terms)
    bound = omega.lq_tail_rule(q) if omega.lq_tail_rule else None
    verdict = "bounded-by-rule" if bound is not None else "unknown"
    return LqReport(q, sums, bound, verdict)


@dataclass(frozen=True)
class SummableSeq:
    """Positive sequence with a caller-certified total sum (summability of a
    black box is not checkable)."""

    term: object        # callable n >= 1 -> positive float
    total: float
    name: str = "f"

    def __call__(self, n):
        v = float(self.term(n))
        if v <= 0:
            raise ValidationError(f"{self.name}({n}) <= 0")
        return v


def geometric_seq(r):
    if not 0 < r < 1:
        raise ValidationError("geometric ratio must be in (0,1)")
    return SummableSeq(lambda n: r ** n, r / (1.0 - r), f"geom({r})")


def power_seq(s):
    if s <= 1:
        raise ValidationError("power decay needs exponent > 1")
    return SummableSeq(lambda n: 1.0 / n ** s, float(zeta(s)) - 1.0,
                       f"power({s})")


def wfq_weight(model, fseq, q):
    """The bounded-index weight: 1 on K_1 and (M^n / f(n))^(1/q) on the shell
    K_{n+1} \\ K_n, M the index bound.

    Requires mu(K_1) = 1 and summable positive f; the L^q integral of the
    inverse is certified < 1 + sum f(n).  Shell values must come out
    non-decreasing and >= 1, otherwise the construction is rejected.
    """
    if not isinstance(fseq, SummableSeq):
        raise ValidationError("fseq must be a SummableSeq (term + certified "
                              "total); non-summable sequences are rejected")
    if not math.isfinite(fseq.total):
        raise ValidationError("fseq total must be finite")
    q = float(q)
    if q < 1:
        raise ValidationError("q must be >= 1")
    if isinstance(model, ShellModel):
        M = model.index_bound if model.bounded_index else None
        levels = len(model.indices_head) + 1
    else:
        if model.measure(1) != 1:
            raise ValidationError("wfq needs mu(K_1) = 1 (normalized Haar)")
        M = max(model.indices)
        levels = model.levels
    if M is None:
        raise ValidationError("model does not certify a bounded index")
    if isinstance(model, ShellModel) and model.measure(1) != 1:
        raise ValidationError("wfq needs mu(K_1) = 1")
    vals = [1.0]
    for n in range(1, levels):
        vals.append((M ** n / fseq(n)) ** (1.0 / q))
    if any(v < 1.0 - 1e-12 for v in vals):
        raise ValidationError("wfq shell values dip below 1")
    if any(x > y + 1e-12 for x, y in zip(vals, vals[1:])):
        raise ValidationError("wfq shell values must be non-decreasing")

    def tail_rule(q_ask, upto=None):
        if abs(q_ask - q) > 1e-12:
            return None
        if upto is None:
            return 1.0 + fseq.total
        return 1.0 + sum(fseq(n) for n in range(1, upto))

    return Weight(model, shell_values=vals, name=f"wfq[{fseq.name},q={q}]",
                  subadditive_constant=1.0, lq_tail_rule=tail_rule)


# -- the section-3 counterexample --------------------------------------------


def _counterexample_value(orders, digits):
    v = 1.0
    for o, m in zip(orders, digits):
        if m:
            v *= float(o) ** max(m, o - m)
    return v


def nonsubadditive_example(chain):
    """The pointwise weight on the chain of cyclic groups C_1 x C_2 x ...
    whose sub-additivity ratio is unbounded along the canonical witnesses."""
    if not isinstance(chain, CyclicSumChain):
        raise ValidationError("the counterexample lives on a cyclic sum")
    if any(o != j + 1 for j, o in enumerate(chain.orders)):
        raise ValidationError("chain must have orders (1, 2, 3, ...)")

    def func(x):
        return _counterexample_value(chain.orders, chain.digits(x))

    w = Weight(chain, func=func, name="nonsubadd")
    w.witness_ratios = lambda nmax: nonsubadd_witness_ratios(chain, nmax)
    return w


def nonsubadd_witness_ratios(chain, nmax):
    """r(n) = w(x_{2n}^n x_{4n}^{2n}) / (w(x_{2n}^n) + w(x_{4n}^{2n})),
    evaluated exactly: (2n)^n (4n)^{2n} / ((2n)^n + (4n)^{2n})."""
    if len(chain.orders) < 4 * nmax:
        raise ValidationError(f"need depth >= {4 * nmax} for n <= {nmax}")
    out = []
    for n in range(1, nmax + 1):
        num = (2 * n) ** n * (4 * n) ** (2 * n)
        den = (2 * n) ** n + (4 * n) ** (2 * n)
        out.append(float(Fraction(num, den)))
    return np.array(out)


# -- axiom checking ----------------------------------------------------------


@dataclass
class AxiomReport:
    level: int
    pairs: int
    exhaustive: bool
    submult_worst: float        # max w(xy) / (w(x) w(y))
    symmetric_worst: float      # max |w(x) - w(x^-1)| / w(x)
    subadd_constant: float      # observed C-hat = max w(xy)/(w(x)+w(y))
    level_max: float            # boundedness witness

    @property
    def submultiplicative(self):
        return self.submult_worst <= 1.0 + 1e-9

    @property
    def symmetric(self):
        return self.symmetric_worst <= 1e-9


def check_axioms(omega, level, pair_cap=10 ** 8, seed=0):
    """Weight-axiom report over K_level pairs: sub-multiplicativity and
    symmetry verdicts, the observed sub-additivity constant, and the level
    max.  Exhaustive when |K|^2 fits the cap, seeded sampling otherwise.
    The observed constant only ever evidences non-sub-additivity; finite
    truncations cannot prove unboundedness.
    """
    chain = omega.model
    n = chain.size(level)
    exhaustive = (n * n <= pair_cap and level <= chain.enumerated_levels)
    if exhaustive and n <= 2048:
        w = np.asarray(omega.values_on(level))
        T = chain.pair_table(level, "mul")
        W = w[T]
        prod = w[:, None] * w[None, :]
        summ = w[:, None] + w[None, :]
        inv_pos = np.array([chain.element_index(chain.inv(x))
                            for x in chain.elements(level)])
        sym = float(np.max(np.abs(w - w[inv_pos]) / w))
        return AxiomReport(level, n * n, True,
                           float(np.max(W / prod)), sym,
                           float(np.max(W / summ)), float(np.max(w)))
    rng = np.random.default_rng(seed)
    draws = min(pair_cap, 10 ** 5)
    submult = subadd = sym = 0.0
    mx = omega(chain.identity)
    for _ in range(draws):
        x = chain.random_element(level, rng)
        y = chain.random_element(level, rng)
        wx, wy, wxy = omega(x), omega(y), omega(chain.mul(x, y))
        submult = max(submult, wxy / (wx * wy))
        subadd = max(subadd, wxy / (wx + wy))
        sym = max(sym, abs(wx - omega(chain.inv(x))) / wx)
        mx = max(mx, wx, wy, wxy)
    return AxiomReport(level, draws, False, submult, sym, subadd, mx)
