"""Finitely supported functions on a chain and their norms: weighted L^1,
Luxemburg, and the Orlicz norm via the Amemiya infimum, plus the Holder
inequality harness.

A weighted norm is by definition the unweighted norm of f * omega (pointwise),
and is implemented literally that way, so 'weighted equals unweighted of the
product' holds by construction.  All sums run in canonical enumeration order
for reproducibility.
"""

from __future__ import annotations

import math

import numpy as np

from .groups import ValidationError
from .young import UnsupportedYoungError

LUX_TOL = 1e-12      # relative bisection tolerance for the Luxemburg norm
AMEMIYA_TOL = 1e-10  # relative tolerance of the Amemiya minimization


class FinSuppFun:
    """Finitely supported function on a GroupChain.

    Stores a {element: value} map with exact zeros pruned; values may be any
    numeric type (Fractions survive arithmetic untouched, which keeps the
    exactness tests honest).  Supports of sums/products of K_i elements stay
    in K_i, so the support level never grows under algebra operations.
    """

    __slots__ = ("chain", "data")

    def __init__(self, chain, data):
        self.chain = chain
        self.data = {x: v for x, v in data.items() if v != 0}

    # -- constructors --------------------------------------------------------

    @classmethod
    def point_mass(cls, chain, x=None):
        """The unit-mass atom delta_x / m; at x = e this is the algebra unit."""
        x = chain.identity if x is None else x
        return cls(chain, {x: 1.0 / chain.haar.m})

    @classmethod
    def delta(cls, chain, x):
        """Literal delta: value 1 at x (unit mass only under counting Haar)."""
        return cls(chain, {x: 1.0})

    @classmethod
    def indicator(cls, chain, level):
        return cls(chain, {x: 1.0 for x in chain.elements(level)})

    @classmethod
    def normalized_indicator(cls, chain, level):
        c = 1.0 / float(chain.measure(level))
        return cls(chain, {x: c for x in chain.elements(level)})

    # -- basics ---------------------------------------------------------------

    @property
    def support_level(self):
        if not self.data:
            return 1
        return max(self.chain.level(x) for x in self.data)

    def __len__(self):
        return len(self.data)

    def __bool__(self):
        return bool(self.data)

    def __call__(self, x):
        return self.data.get(x, 0)

    def sorted_items(self):
        return sorted(self.data.items(),
                      key=lambda kv: self.chain.element_index(kv[0]))

    def vector(self, level):
        """Dense complex coefficient vector over elements(level)."""
        chain = self.chain
        n = chain.size(level)
        out = np.zeros(n, dtype=complex)
        for x, v in self.data.items():
            pos = chain.element_index(x)
            if pos >= n:
                raise ValidationError("support exceeds the requested level")
            out[pos] = complex(v)
        return out

    @classmethod
    def from_vector(cls, chain, level, vec, prune=0.0):
        data = {}
        for pos, v in enumerate(np.asarray(vec)):
            if v != 0 and (prune == 0.0 or abs(v) > prune):
                data[chain.element_at(pos)] = complex(v)
        return cls(chain, data)

    # -- linear structure ------------------------------------------------------

    def __add__(self, other):
        self._check_chain(other)
        data = dict(self.data)
        for x, v in other.data.items():
            data[x] = data.get(x, 0) + v
        return FinSuppFun(self.chain, data)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        return FinSuppFun(self.chain, {x: v * c for x, v in self.data.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def conj(self):
        return FinSuppFun(self.chain,
                          {x: np.conj(v) for x, v in self.data.items()})

    def abs(self):
        return FinSuppFun(self.chain,
                          {x: abs(v) for x, v in self.data.items()})

    def pointwise_mul(self, weight):
        """f * omega pointwise; the definitional route to weighted norms."""
        return FinSuppFun(self.chain,
                          {x: v * weight(x) for x, v in self.data.items()})

    def _check_chain(self, other):
        if other.chain is not self.chain:
            raise ValidationError("operands live on different chains")

    def allclose(self, other, tol=1e-10):
        diff = self - other
        return all(abs(v) <= tol for v in diff.data.values())

    def __repr__(self):
        return (f"FinSuppFun(|supp|={len(self.data)}, "
                f"level={self.support_level})")


def _weighted_magnitudes(f, omega):
    """(|f(x)| omega(x)) in canonical order, plus the Haar mass."""
    if omega is not None:
        f = f.pointwise_mul(omega)
    mags = np.array([abs(v) for _, v in f.sorted_items()], dtype=float)
    return mags, f.chain.haar.m


def l1_norm(f, omega=None):
    """m * sum |f| omega; the weighted L^1 norm (omega = 1 when absent)."""
    mags, m = _weighted_magnitudes(f, omega)
    return m * math.fsum(mags)


def _require_solver_young(phi):
    if not getattr(phi, "solver_ok", False):
        raise UnsupportedYoungError(
            f"{phi!r} is outside the solver class (must be finite, "
            "continuous, strictly increasing on (0, inf))")


def luxemburg_norm(f, phi, omega=None):
    """inf{k > 0 : m sum Phi(|f| omega / k) <= 1} by bisection.

    Returns the upper end of the final bracket, so the integral constraint
    holds at the returned value (within the bracket width).
    """
    _require_solver_young(phi)
    mags, m = _weighted_magnitudes(f, omega)
    if mags.size == 0:
        return 0.0

    def budget(k):
        with np.errstate(over="ignore"):
            return m * float(np.sum(phi(mags / k)))

    k0 = max(float(np.max(mags)), 1e-300)
    if budget(k0) <= 1.0:
        hi = lo = k0
        while budget(lo) <= 1.0 and lo > 1e-280:
            hi = lo
            lo /= 2.0
    else:
        lo = hi = k0
        while budget(hi) > 1.0:
            lo = hi
            hi *= 2.0
            if hi > 1e280:
                raise ValidationError("Luxemburg bracket expansion failed")
    while (hi - lo) > LUX_TOL * hi:
        mid = 0.5 * (lo + hi)
        if budget(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def orlicz_norm(f, phi, omega=None):
    """Orlicz norm via the Amemiya representation
    inf_{k>0} (1 + m sum Phi(k |f| omega)) / k, minimized on a log-k grid
    bracket followed by golden-section.  Sandwiched in [N_Phi, 2 N_Phi].
    """
    _require_solver_young(phi)
    mags, m = _weighted_magnitudes(f, omega)
    if mags.size == 0:
        return 0.0

    def objective(t):  # t = log k
        k = math.exp(t)
        with np.errstate(over="ignore"):
            s = m * float(np.sum(phi(k * mags)))
        if not math.isfinite(s):
            return math.inf
        return (1.0 + s) / k

    # the minimizer satisfies k* N_Phi in [1/2, 2]; bracket around that scale
    n_lux = luxemburg_norm(f, phi, omega)
    t0 = -math.log(max(n_lux, 1e-300))
    lo, hi = t0 - 8.0, t0 + 8.0
    while objective(t0) > min(objective(lo), objective(hi)) and hi - lo < 240:
        lo -= 8.0
        hi += 8.0
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = objective(c), objective(d)
    while (b - a) > AMEMIYA_TOL:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = objective(d)
    return min(objective(0.5 * (a + b)), fc, fd)


def orlicz_norm_dual_sample(f, phi, omega=None, trials=64, seed=0):
    """Sampled lower bound for the defining dual sup of the Orlicz norm.

    Draws random g on the support of f omega, projects each onto the boundary
    of the Psi modular ball, and keeps the best pairing integral; the KKT
    candidate g ~ Phi'(k |f| omega) is approximated by a finite difference and
    included.  Always <= the true norm, and tight when the candidate is good.
    """
    psi = phi.conjugate()
    mags, m = _weighted_magnitudes(f, omega)
    if mags.size == 0:
        return 0.0

    def pair_value(g):
        g = np.abs(g)
        # scale g onto the Psi-ball boundary: m sum Psi(t g) = 1
        def modular(t):
            with np.errstate(over="ignore"):
                return m * float(np.sum(psi(t * g)))
        t_hi = 1.0
        while modular(t_hi) < 1.0 and t_hi < 1e12:
            t_hi *= 2.0
        t_lo = t_hi
        while modular(t_lo) > 1.0 and t_lo > 1e-12:
            t_lo /= 2.0
        for _ in range(80):
            mid = 0.5 * (t_lo + t_hi)
            if modular(mid) > 1.0:
                t_hi = mid
            else:
                t_lo = mid
        return m * float(np.sum(mags * t_lo * g))

    rng = np.random.default_rng(seed)
    best = 0.0
    # structured candidate from the Young equality case
    eps = 1e-6
    k_star = 1.0 / max(luxemburg_norm(f, phi, omega), 1e-300)
    grad = (np.asarray(phi(k_star * mags + eps), dtype=float)
            - np.asarray(phi(k_star * mags), dtype=float)) / eps
    if np.any(grad > 0):
        best = pair_value(grad)
    for _ in range(trials):
        g = rng.random(mags.size) * mags
        if np.any(g > 0):
            best = max(best, pair_value(g))
    return best


def holder_sides(f, g, phi):
    """(m sum |f g|, orlicz_norm(f, Phi) * luxemburg_norm(g, Psi)); the first
    never exceeds the second (Holder inequality for the complementary pair).
    """
    f._check_chain(g)
    psi = phi.conjugate()
    _require_solver_young(psi)
    m = f.chain.haar.m
    common = sorted(set(f.data) & set(g.data), key=f.chain.element_index)
    lhs = m * math.fsum(abs(f.data[x] * g.data[x]) for x in common)
    rhs = orlicz_norm(f, phi) * luxemburg_norm(g, psi)
    return lhs, rhs
