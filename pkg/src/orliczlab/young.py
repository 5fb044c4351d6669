"""Young functions, complementary pairs, and the doubling condition.

A Young function is convex, even, vanishes at 0 and tends to infinity.  The
complementary function is the one-sided Legendre transform
Psi(y) = sup {x|y| - Phi(x) : x >= 0}; catalog pairs carry closed forms and
everything else falls back to a bracketed golden-section maximization of the
concave objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import ValidationError


class UnsupportedYoungError(ValidationError):
    """Young function outside the solver class (infinite-valued or flat)."""


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class YoungFunction:
    """Evaluable Young function, extended to all of R by evenness.

    ``solver_ok`` marks functions that are finite, continuous and strictly
    increasing on (0, inf); the norm solvers reject anything else.
    """

    def __init__(self, name, evaluator, complement=None, delta2=None,
                 finite=True, solver_ok=True, params=None, check=True):
        self.name = name
        self._eval = evaluator
        self.complement_closed = complement     # callable y >= 0 -> value
        self.delta2 = delta2                    # known constant, or None
        self.finite = finite
        self.solver_ok = solver_ok and finite
        self.params = dict(params or {})
        if check:
            self._validate()

    def __call__(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        with np.errstate(over="ignore"):
            return self._eval(x)

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"YoungFunction({self.name}{', ' + ps if ps else ''})"

    def _validate(self):
        if abs(float(self(0.0))) > 1e-300:
            raise ValidationError(f"{self.name}: Phi(0) != 0")
        grid = np.geomspace(1e-6, 1e2, 97)
        vals = self(grid)
        if not self.finite:
            return
        if np.any(~np.isfinite(vals)):
            raise ValidationError(f"{self.name}: infinite on sample grid")
        mid = self((grid[:-1] + grid[1:]) / 2.0)
        slack = 1e-12 * (1.0 + np.abs(vals[:-1] + vals[1:]))
        if np.any(mid > (vals[:-1] + vals[1:]) / 2.0 + slack):
            raise ValidationError(f"{self.name}: midpoint convexity fails")
        if np.any(np.diff(vals) < -1e-15):
            raise ValidationError(f"{self.name}: not non-decreasing")
        if vals[-1] < 1.0:
            raise ValidationError(f"{self.name}: no growth at grid endpoint")

    # -- complementary function -------------------------------------------

    def complementary(self, y):
        """Psi(y) = sup_{x>=0} (x y - Phi(x)); +inf when unbounded."""
        y = float(y)
        if y < 0:
            raise ValidationError("complementary expects y >= 0 "
                                  "(use evenness externally)")
        if self.complement_closed is not None:
            return float(self.complement_closed(y))
        return _conjugate_numeric(self, y)

    def conjugate(self):
        """The complementary function as a YoungFunction."""
        if self._conjugate_partner is not None:
            return self._conjugate_partner()
        src = self.complement_closed
        if src is None:
            phi = self
            src = lambda v: _conjugate_numeric(phi, v)  # noqa: E731

        def ev(x):
            flat = np.atleast_1d(x).astype(float)
            out = np.array([src(v) for v in flat], dtype=float)
            return out.reshape(np.shape(x)) if np.shape(x) else float(out[0])

        return YoungFunction(f"conj[{self.name}]", ev, check=False,
                             params=self.params)

    _conjugate_partner = None


def _conjugate_numeric(phi, y, tol=1e-10, unbounded_cap=1e15):
    """Bracketed golden-section max of the concave x -> x y - Phi(x)."""
    if y == 0.0:
        return 0.0

    def g(x):
        v = x * y - float(phi(x))
        return v if math.isfinite(v) else -math.inf

    hi, best = 1.0, g(1.0)
    while True:
        cand = g(2.0 * hi)
        if cand <= best:
            break
        hi *= 2.0
        best = cand
        if hi > unbounded_cap:
            return math.inf
    lo, hi = 0.0, 2.0 * hi
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    while (b - a) > tol * max(1.0, abs(a) + abs(b)):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _GOLDEN * (b - a)
            gd = g(d)
    x = (a + b) / 2.0
    return max(g(x), 0.0)


# -- catalog ----------------------------------------------------------------


def p_power(p):
    """Phi(x) = |x|^p / p; complement |y|^q / q with 1/p + 1/q = 1.

    p = 1 gives |x|, whose complement is the indicator of [-1, 1] (0 there,
    +inf outside) -- valid as a Young function but rejected by norm solvers.
    """
    p = float(p)
    if p < 1:
        raise ValidationError("p_power requires p >= 1")
    if p == 1.0:
        def comp(y):
            return 0.0 if y <= 1.0 else math.inf

        def comp_ev(x):
            x = np.atleast_1d(x)
            out = np.where(x <= 1.0, 0.0, np.inf)
            return out.reshape(np.shape(x)) if np.shape(x) else float(out[0])

        f = YoungFunction("p_power", lambda x: x, complement=comp,
                          delta2=2.0, params={"p": 1.0})
        f._conjugate_partner = lambda: YoungFunction(
            "linf_indicator", comp_ev, finite=False, solver_ok=False,
            check=False)
        return f
    q = p / (p - 1.0)
    f = YoungFunction("p_power", lambda x: x ** p / p,
                      complement=lambda y: y ** q / q,
                      delta2=2.0 ** p, params={"p": p})
    f._conjugate_partner = lambda: p_power(q)
    return f


def exp_minus():
    """Phi(x) = e^|x| - |x| - 1; complement (1+y)log(1+y) - y.  Not Delta2."""
    f = YoungFunction(
        "exp_minus", lambda x: np.expm1(x) - x,
        complement=lambda y: (1.0 + y) * math.log1p(y) - y,
        params={})
    return f


def cosh_minus():
    """Phi(x) = cosh(x) - 1; complement y asinh(y) - sqrt(1+y^2) + 1."""
    f = YoungFunction(
        "cosh_minus", lambda x: np.cosh(x) - 1.0,
        complement=lambda y: y * math.asinh(y) - math.hypot(1.0, y) + 1.0,
        params={})
    return f


def xlog():
    """Phi(x) = |x| log(1 + |x|); complement numeric (no elementary form)."""
    return YoungFunction("xlog", lambda x: x * np.log1p(x), params={})


CATALOG = {
    "p_power": p_power,
    "exp_minus": exp_minus,
    "cosh": cosh_minus,
    "xlog": xlog,
}


def from_config(spec):
    """Build a catalog Young function from a config dict {"kind": ..., ...}."""
    kind = spec.get("kind")
    if kind not in CATALOG:
        raise ValidationError(f"unknown Young kind {kind!r}")
    if kind == "p_power":
        return p_power(spec.get("p", 2.0))
    return CATALOG[kind]()


# -- doubling condition ------------------------------------------------------


@dataclass
class Delta2Report:
    """Heuristic verdict on Phi(2x) <= C Phi(x) over a sample grid."""

    bounded: bool
    constant: float | None
    grid: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)
    heuristic: bool = True


def delta2_constant(phi, grid=None):
    """Sup of Phi(2x)/Phi(x) on the grid, or growing-ratio counter-evidence.

    The verdict is heuristic by construction: a finite grid can neither prove
    nor refute the doubling condition.
    """
    if grid is None:
        grid = np.geomspace(1e-6, 1e6, 241)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 200 or grid.min() > 1e-6 or grid.max() < 1e6:
        raise ValidationError("grid must cover [1e-6, 1e6] with >= 200 points")
    if not phi.finite:
        raise ValidationError("Phi takes the value +inf")
    base = np.asarray(phi(grid), dtype=float)
    doubled = np.asarray(phi(2.0 * grid), dtype=float)
    # double overflow past float range is already unboundedness evidence;
    # keep the grid points where the ratio is a finite number
    overflowed = np.isinf(doubled) & np.isfinite(base)
    keep = (base > 0) & np.isfinite(base) & np.isfinite(doubled)
    grid, base, doubled = grid[keep], base[keep], doubled[keep]
    ratios = doubled / base
    tail = ratios[int(0.8 * ratios.size):]
    tail_flat = (not overflowed.any()
                 and np.all(np.diff(tail) <= 1e-9 * tail[:-1] + 1e-12))
    if tail_flat:
        return Delta2Report(True, float(np.max(ratios)), grid, ratios)
    return Delta2Report(False, None, grid, ratios)


def young_inequality_margin(phi, x, y):
    """Phi(x) + Psi(y) - x y; >= 0 up to numerical slack by Young's inequality."""
    psi_val = phi.complementary(abs(y))
    if math.isinf(psi_val):
        return math.inf
    return float(phi(x)) + psi_val - x * y
