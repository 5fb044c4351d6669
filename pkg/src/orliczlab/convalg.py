"""Convolution algebra over a group chain: products, involution, the left
regular representation, exact spectra, Gelfand spectral-radius sequences,
the u-series, and the proven norm inequalities as checkable contracts.

The regular representation at level i realizes the group algebra of K_i
faithfully (pullback inverts it exactly), which is what makes independent
spectral oracles possible at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
import scipy.signal

from .groups import DENSE_CAP, ValidationError
from .norms import FinSuppFun, l1_norm, luxemburg_norm, orlicz_norm
from .weights import uniform_grs_weight

LOG2_43 = math.log2(4.0 / 3.0)


# -- norm tags ---------------------------------------------------------------


@dataclass(frozen=True)
class NormTag:
    """Which norm a report refers to: 'l1', 'l1w', 'luxemburg' or 'orlicz'."""

    kind: str
    phi: object = None
    omega: object = None

    def label(self):
        bits = [self.kind]
        if self.phi is not None:
            bits.append(self.phi.name)
        if self.omega is not None:
            bits.append(self.omega.name)
        return ":".join(bits)


def norm_value(f, tag):
    if tag.kind == "l1":
        return l1_norm(f)
    if tag.kind == "l1w":
        return l1_norm(f, tag.omega)
    if tag.kind == "luxemburg":
        return luxemburg_norm(f, tag.phi, tag.omega)
    if tag.kind == "orlicz":
        return orlicz_norm(f, tag.phi, tag.omega)
    raise ValidationError(f"unknown norm tag {tag.kind!r}")


# -- algebra operations ------------------------------------------------------


def _dense_ok(chain, level):
    return (level <= chain.enumerated_levels
            and chain.size(level) <= DENSE_CAP)


def convolve(f, g):
    """(f*g)(x) = m sum_y f(y) g(y^-1 x); support stays in the joint level.

    Uses a dense table route on enumerated levels when the support is a
    sizable fraction of the group, and the direct double loop otherwise.
    Fraction-valued inputs stay exact (the Haar mass is a Fraction too).
    """
    f._check_chain(g)
    chain = f.chain
    if not f.data or not g.data:
        return FinSuppFun(chain, {})
    exact = all(isinstance(v, (int, Fraction))
                for v in list(f.data.values()) + list(g.data.values()))
    level = max(f.support_level, g.support_level)
    n = chain.size(level)
    dense = (not exact and _dense_ok(chain, level)
             and len(f) * len(g) > 4 * n)
    if dense:
        C = chain.pair_table(level, "conv")
        fv, gv = f.vector(level), g.vector(level)
        out = chain.haar.m * (fv @ gv[C])
        return FinSuppFun.from_vector(chain, level, out)
    scale = chain.haar.point_mass if exact else chain.haar.m
    acc = {}
    for y, fy in f.sorted_items():
        for z, gz in g.sorted_items():
            x = chain.mul(y, z)
            acc[x] = acc.get(x, 0) + fy * gz
    return FinSuppFun(chain, {x: v * scale for x, v in acc.items()})


def conv_power(f, n):
    """f^{*n} by binary powering (n >= 1)."""
    if n < 1:
        raise ValidationError("conv_power needs n >= 1")
    acc = None
    base = f
    while n:
        if n & 1:
            acc = base if acc is None else convolve(acc, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return acc


def involution(f):
    """f*(x) = conj(f(x^-1)); isometric for every implemented norm."""
    chain = f.chain
    return FinSuppFun(chain, {chain.inv(x): np.conj(v)
                              for x, v in f.data.items()})


def is_self_adjoint(f, tol=1e-12):
    diff = f - involution(f)
    scale = max((abs(v) for v in f.data.values()), default=0.0)
    return all(abs(v) <= tol * max(scale, 1.0) for v in diff.data.values())


def translate(f, x):
    """(L_x f)(y) = f(x^-1 y); support moves to x . supp(f)."""
    chain = f.chain
    return FinSuppFun(chain, {chain.mul(x, s): v for s, v in f.data.items()})


def random_finsupp(chain, level, rng, self_adjoint=False, real=False):
    """Dense random element of the level-i group algebra, seeded."""
    n = chain.size(level)
    vals = rng.standard_normal(n)
    if not real:
        vals = vals + 1j * rng.standard_normal(n)
    f = FinSuppFun.from_vector(chain, level, vals)
    if self_adjoint:
        f = (f + involution(f)) * 0.5
    return f


# -- regular representation and spectra ---------------------------------------


def regular_rep(f, level=None):
    """Dense matrix M[x, y] = m f(x y^-1) over elements(level).

    f -> M is an algebra homomorphism; the involution maps to the conjugate
    transpose and the unit delta_e/m to the identity.
    """
    chain = f.chain
    if level is None:
        level = f.support_level
    if level < f.support_level:
        raise ValidationError("level below the support level")
    chain._require_enumerated(level)
    P = chain.pair_table(level, "rep")
    fv = f.vector(level)
    return chain.haar.m * fv[P]


def pullback(chain, level, M):
    """Inverse of regular_rep on its image: f(x) = M[x, e]/m, exactly."""
    e_pos = chain.element_index(chain.identity)
    return FinSuppFun.from_vector(chain, level,
                                  np.asarray(M)[:, e_pos] / chain.haar.m)


def spectrum_exact(f, level=None):
    """Eigenvalues of the regular representation at the support level.

    Self-adjoint f produce an exactly Hermitian matrix and take the Hermitian
    solver path (real outputs by construction).
    """
    M = regular_rep(f, level)
    if np.array_equal(M, M.conj().T):
        return np.linalg.eigvalsh(M)
    return np.linalg.eigvals(M)


def spectrum_general(f, level=None):
    """Same matrix through the general dense solver; the cross-check path."""
    return np.linalg.eigvals(regular_rep(f, level))


def spectral_radius(f):
    return float(np.max(np.abs(spectrum_exact(f)))) if f.data else 0.0


# -- Gelfand sequences --------------------------------------------------------


@dataclass
class GelfandReport:
    """The sequence ||f^{*2^k}||^(1/2^k) for one norm tag, with the exact
    radius from the support-level spectrum.

    For submultiplicative tags (the L^1 family) every term dominates the
    radius; the Orlicz-family values may dip below it at small k since the
    algebra norm is submultiplicative only up to a constant.
    """

    tag_label: str
    values: np.ndarray = field(repr=False)
    exact_radius: float
    final_rel_error: float
    submultiplicative_tag: bool


def gelfand_sequence(f, tag, kmax=12):
    """Repeated squaring with L^1 renormalization: each squaring divides by
    the current L^1 norm and accumulates the logarithm, so 4096-fold products
    neither overflow nor underflow while the n-th roots stay exact."""
    if kmax > 40:
        raise ValidationError("kmax must be <= 40")
    chain = f.chain
    level = f.support_level
    values = []
    radius = spectral_radius(f)
    h = f
    log_c = 0.0
    dead = False
    for k in range(kmax + 1):
        if dead:
            values.append(0.0)
            continue
        nk = norm_value(h, tag)
        values.append(math.exp((log_c + math.log(nk)) / 2.0 ** k)
                      if nk > 0 else 0.0)
        if k == kmax:
            break
        h2 = convolve(h, h)
        s = l1_norm(h2)
        if s == 0.0:
            dead = True
            continue
        h = h2 * (1.0 / s)
        log_c = 2.0 * log_c + math.log(s)
    values = np.array(values)
    rel = abs(values[-1] - radius) / max(radius, 1e-300)
    return GelfandReport(tag.label(), values, radius, rel,
                         tag.kind in ("l1", "l1w"))


# -- the u-series -------------------------------------------------------------


def desk_bound(chain, level, tag):
    """B_K = (2/m) ||chi_K||: for self-adjoint f supported in K the matrix of
    u(inf) is (unitary - identity), entries bounded by 2, so the pulled-back
    coefficients are bounded by 2/m and any monotone norm of u(inf) by B_K."""
    ind = FinSuppFun.indicator(chain, level)
    return (2.0 / chain.haar.m) * norm_value(ind, tag)


def u_series(f, t, tol, tag=NormTag("l1")):
    """Partial sum of sum_k (t f)^{*k} / k! with a certified tail bound < tol.

    The remainder after K terms is bounded through the weighted-L^1 module
    inequality: ||f^{*k}|| <= r T1^k / T1 with T1 = |t| ||f||_{1,omega} and
    r the norm ratio, giving r T1^(K+1) e^(T1) / (K+1)!.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if not f.data or t == 0:
        return FinSuppFun(f.chain, {}), 0.0, 0
    omega = tag.omega
    base = l1_norm(f, omega)
    ratio = norm_value(f, tag) / base if tag.kind not in ("l1", "l1w") else 1.0
    T1 = abs(t) * base

    def tail(K):
        return ratio * math.exp(
            (K + 1) * math.log(T1) - math.lgamma(K + 2) + T1) \
            if T1 > 0 else 0.0

    K = 1
    while tail(K) >= tol:
        K += 1
        if K > 600:
            raise ValidationError("series tail does not certify below tol")
    term = f * t
    acc = term
    for k in range(2, K + 1):
        term = convolve(term, f) * (t / k)
        acc = acc + term
    return acc, tail(K), K


def u_exact(f, t):
    """Independent oracle: pullback of expm(t . pi(f)) - I (faithfulness of
    the regular representation makes this the exact u(t f))."""
    chain = f.chain
    level = f.support_level
    A = regular_rep(f, level)
    E = scipy.linalg.expm(t * A) - np.eye(A.shape[0])
    return pullback(chain, level, E)


@dataclass
class GrowthProfile:
    ns: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    fitted_constant: float
    gamma: float
    desk_bound: float

    @property
    def within_desk_bound(self):
        return bool(np.all(self.values <= self.desk_bound * (1 + 1e-9)))


def growth_profile(f, gamma, N, tag=NormTag("l1")):
    """(n, ||u(inf)||) for n <= N with the fitted envelope constant
    C-hat = max ||u(inf)|| e^(-2 n^gamma), plus the uniform desk bound."""
    if not (LOG2_43 < gamma < 1.0):
        raise ValidationError("gamma must lie in (log2(4/3), 1)")
    if not is_self_adjoint(f):
        raise ValidationError("growth profile needs self-adjoint f")
    ns = np.arange(0, N + 1)
    vals = np.zeros(N + 1)
    for n in range(1, N + 1):
        vals[n] = norm_value(u_exact(f, 1j * n), tag)
    fitted = float(np.max(vals[1:] * np.exp(-2.0 * ns[1:] ** gamma))) \
        if N >= 1 else 0.0
    B = desk_bound(f.chain, f.support_level, tag)
    return GrowthProfile(ns, vals, fitted, gamma, B)


# -- inequality harness -------------------------------------------------------


@dataclass
class SuiteReport:
    samples: int
    seed: int
    exploratory: bool
    max_r2: float           # fitted constant for the sub-additive bound
    max_r3: float           # module bound, proven <= 1
    max_rl: float           # translation bound, proven <= 1
    max_sandwich: float     # orlicz / luxemburg, proven in [1, 2]
    min_sandwich: float
    hard_failures: list

    @property
    def ok(self):
        return not self.hard_failures


def inequality_suite(chain, phi, omega, samples, seed, level=2,
                     flavor="orlicz"):
    """Seeded sampling of the proven inequalities.

    r3 = ||f*g|| / (||f||_{1,w} ||g||) and rL = ||L_x f|| / (w(x) ||f||) are
    hard contracts (<= 1 + 1e-9); r2 against the sub-additive bound is
    reported as a fitted constant, exploratory when omega carries no
    certified sub-additivity constant.
    """
    rng = np.random.default_rng(seed)
    nrm = orlicz_norm if flavor == "orlicz" else luxemburg_norm
    max_r2 = max_r3 = max_rl = 0.0
    max_sw, min_sw = 0.0, math.inf
    failures = []
    for s in range(samples):
        f = random_finsupp(chain, level, rng)
        g = random_finsupp(chain, level, rng)
        x = chain.random_element(level, rng)
        fg = convolve(f, g)
        n_fg = nrm(fg, phi, omega)
        n_f, n_g = nrm(f, phi, omega), nrm(g, phi, omega)
        l1f, l1g = l1_norm(f), l1_norm(g)
        l1wf = l1_norm(f, omega)
        r2 = n_fg / (l1f * n_g + n_f * l1g)
        r3 = n_fg / (l1wf * n_g)
        rl = nrm(translate(f, x), phi, omega) / (omega(x) * n_f)
        lux = luxemburg_norm(f, phi, omega)
        sw = orlicz_norm(f, phi, omega) / lux
        max_r2, max_r3, max_rl = (max(max_r2, r2), max(max_r3, r3),
                                  max(max_rl, rl))
        max_sw, min_sw = max(max_sw, sw), min(min_sw, sw)
        if r3 > 1 + 1e-9:
            failures.append(("r3", s, r3))
        if rl > 1 + 1e-9:
            failures.append(("rL", s, rl))
        if not (1 - 1e-9 <= sw <= 2 + 1e-9):
            failures.append(("sandwich", s, sw))
    return SuiteReport(samples, seed,
                       omega.subadditive_constant is None,
                       max_r2, max_r3, max_rl, max_sw, min_sw, failures)


def _zconv(u, v):
    if u.size * v.size <= 2 ** 22:
        return np.convolve(u, v)
    return np.clip(scipy.signal.fftconvolve(u, v), 0.0, None)


def _zpow(a, n):
    acc = None
    base = a
    while n:
        if n & 1:
            acc = base if acc is None else _zconv(acc, base)
        n >>= 1
        if n:
            base = _zconv(base, base)
    return acc


def radial_majorant_check(f, omega, n):
    """(||f^{*n}||_{1,w}, ||a^{*n}||_{l1(Z, w')}) where a is the shell-mass
    sequence of |f| placed at positions 1..L of the integer line and w' the
    induced level-sup weight; the left side never exceeds the right."""
    if n < 1 or n > 2 ** 20:
        raise ValidationError("n must be in 1..2^20")
    chain = f.chain
    m = chain.haar.m
    lhs = l1_norm(conv_power(f, n), omega)
    L = f.support_level
    a = np.zeros(L + 1)
    for x, v in f.data.items():
        a[chain.level(x)] += m * abs(v)
    zp = _zpow(a, n)
    wprime = uniform_grs_weight(omega)
    wvals = np.array([wprime(j) for j in range(zp.size)])
    rhs = float(np.sum(zp * wvals))
    return lhs, rhs
