"""Smooth 2pi-periodic functional calculus on self-adjoint elements.

The function algebra consists of periodic functions whose Fourier
coefficients are summable against exp(2|n|^gamma); plateau members are built
constructively as a periodized interval indicator convolved with an infinite
convolution of uniform densities of half-widths c k^(-1/gamma'), whose
coefficients are explicit sinc products with a closed-form certified decay
envelope.  Applying such a function to a self-adjoint element runs through
two independent routes: the exponential series in the regular representation
(apply_series) and eigenvalue synthesis (apply_spectral).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.special import zeta

from .convalg import (NormTag, desk_bound, is_self_adjoint, norm_value,
                      regular_rep, pullback, convolve)
from .groups import ValidationError
from .norms import FinSuppFun

LOG2_43 = math.log2(4.0 / 3.0)
TWO_PI = 2.0 * math.pi

# Taylor coefficients of -log(sin x / x) = sum_j zeta(2j)/(j pi^(2j)) x^(2j)
_LOGSINC = [float(zeta(2 * j)) / (j * math.pi ** (2 * j))
            for j in range(1, 11)]
_HEAD_THRESHOLD = 0.8   # tail series only where n a_k <= this (< pi)


def _logsumexp(values):
    values = np.asarray(values, dtype=float)
    values = values[values > -np.inf]
    if values.size == 0:
        return -math.inf
    mx = float(np.max(values))
    return mx + math.log(float(np.sum(np.exp(values - mx))))


class Mollifier:
    """Infinite convolution of uniform densities, half-widths a_k = c k^(-s),
    s = 1/gamma'; total half-width c zeta(s) by construction."""

    def __init__(self, gamma, c):
        self.gamma = gamma
        self.gamma_prime = (1.0 + gamma) / 2.0
        self.s = 1.0 / self.gamma_prime
        self.c = c

    def a(self, k):
        return self.c * np.asarray(k, dtype=float) ** (-self.s)

    def transform(self, ns):
        """prod_k sinc(n a_k) for an array of integers |n| <= max(ns): exact
        head product plus the zeta-tail of the log-sinc series."""
        ns = np.abs(np.asarray(ns, dtype=float))
        nmax = float(np.max(ns)) if ns.size else 0.0
        if nmax == 0.0:
            return np.ones_like(ns)
        k_head = max(1, math.ceil((nmax * self.c / _HEAD_THRESHOLD)
                                  ** self.gamma_prime))
        ak = self.a(np.arange(1, k_head + 1))
        args = ns[:, None] * ak[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            head = np.where(args == 0.0, 1.0, np.sin(args) / args)
        headprod = np.prod(head, axis=1)
        tail_log = np.zeros_like(ns)
        for j, coef in enumerate(_LOGSINC, start=1):
            s_j = self.c ** (2 * j) * float(
                zeta(2 * j * self.s, k_head + 1))
            tail_log -= coef * ns ** (2 * j) * s_j
        return headprod * np.exp(tail_log)

    def log_env(self, n):
        """Certified log bound for |transform(n)|: keep the K = (|n|c/e)^g'
        factors with argument >= e, bound each by 1/(n a_k) and the rest by 1.
        Closed form via lgamma; O(1) per n and non-increasing in |n|."""
        n = abs(float(n))
        if n == 0.0:
            return 0.0
        K = math.floor((n * self.c / math.e) ** self.gamma_prime)
        if K < 1:
            return 0.0
        return -K * math.log(n * self.c) + math.lgamma(K + 1) * self.s

    def log_env_vec(self, ns):
        from scipy.special import gammaln

        ns = np.abs(np.asarray(ns, dtype=float))
        K = np.floor((ns * self.c / math.e) ** self.gamma_prime)
        out = np.zeros_like(ns)
        mask = K >= 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out[mask] = (-K[mask] * np.log(ns[mask] * self.c)
                         + gammaln(K[mask] + 1.0) * self.s)
        return out


@dataclass
class WeightedNormCertificate:
    """Log-scale account of sum |phi-hat(n)| exp(2|n|^gamma): actual terms on
    the stored range, envelope terms through the hump, and a geometric tail.
    The raw value may exceed double range for narrow plateaus, so only the
    log is guaranteed finite.

    method 'walk' carries a certified tail_fraction beyond the horizon;
    method 'algebra' (for pointwise products) bounds the total by the product
    of the factors' certificates instead.
    """

    stored_log: float
    total_log: float
    tail_fraction: float      # certified mass beyond the accounted horizon
    horizon: int
    method: str = "walk"

    @property
    def value(self):
        return math.exp(self.total_log) if self.total_log < 700 else math.inf


class AGammaFunction:
    """Periodic smooth function given by coefficients on [-N, N] plus a
    certified decay envelope valid for every |n|."""

    def __init__(self, gamma, coeffs, env, env_vec=None, log_env_vec=None,
                 name="agamma", check=True):
        if not (0.0 < gamma < 1.0):
            raise ValidationError("gamma must lie in (0, 1)")
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.size % 2 != 1:
            raise ValidationError("coefficient array must cover [-N, N]")
        self.gamma = gamma
        self.N = coeffs.size // 2
        self.coeffs = coeffs
        self.env = env
        self._env_vec = env_vec
        self._log_env_vec = log_env_vec
        self.name = name
        self._cert = None
        self._env_tail_cache = None
        # suffix sums of |c_k| + |c_{-k}| make l1_tail O(1)
        b = np.abs(coeffs[self.N:]).copy()
        b[1:] += np.abs(coeffs[: self.N][::-1])
        self._stored_tail = np.concatenate(
            [np.cumsum(b[::-1])[::-1], [0.0]])  # index k: sum over |n| > k-1
        if check:
            flipped = np.conj(coeffs[::-1])
            scale = np.max(np.abs(coeffs)) + 1e-300
            if np.max(np.abs(coeffs - flipped)) > 1e-12 * max(scale, 1.0):
                raise ValidationError("coefficients of a real function must "
                                      "satisfy c(-n) = conj(c(n))")
            if abs(self.value(0.0)) > 1e-8:
                raise ValidationError("membership requires phi(0) = 0")

    def env_values(self, ns):
        if self._env_vec is not None:
            return self._env_vec(ns)
        return np.array([self.env(int(v)) for v in np.asarray(ns).ravel()])

    def log_env_values(self, ns):
        """log of the envelope without underflow (the weighted certificate
        walks through magnitudes far below the double range)."""
        if self._log_env_vec is not None:
            return self._log_env_vec(ns)
        return np.log(np.maximum(self.env_values(ns), 1e-320))

    def coeff(self, n):
        return self.coeffs[n + self.N] if abs(n) <= self.N else 0.0

    @property
    def ns(self):
        return np.arange(-self.N, self.N + 1)

    def value(self, x):
        """Synthesize sum c_n e^{inx} (scalar or array argument)."""
        x = np.asarray(x, dtype=float)
        out = np.tensordot(np.exp(1j * np.multiply.outer(x, self.ns)),
                           self.coeffs, axes=([-1], [0]))
        return out if x.shape else complex(out)

    def grid_values(self, m):
        """Values on the uniform grid 2 pi j / m via FFT synthesis."""
        if 2 * self.N + 1 > m:
            raise ValidationError("grid too coarse for the stored range")
        arr = np.zeros(m, dtype=complex)
        arr[np.mod(self.ns, m)] += self.coeffs
        return m * np.fft.ifft(arr)

    # -- summability accounting ---------------------------------------------

    def env_l1_tail(self, n0, ratio_probe=64):
        """Certified bound for sum_{|n| > n0} |phi-hat(n)| via the envelope:
        blockwise sums until the terms decay geometrically, then a ratio
        bound closes the tail."""
        total = 0.0
        n = n0 + 1
        while True:
            vals = self.env_values(np.arange(n, n + 4096))
            total += float(np.sum(vals))
            n += 4096
            if vals[-1] < 1e-18 * max(total, 1e-300) or n > 10 ** 7:
                r = self.env(n) / max(self.env(n - ratio_probe), 1e-300)
                r = r ** (1.0 / ratio_probe)
                if r < 1.0:
                    total += self.env(n) / (1.0 - r)
                break
        return 2.0 * total

    def _env_tail_beyond_store(self):
        if self._env_tail_cache is None:
            self._env_tail_cache = self.env_l1_tail(self.N)
        return self._env_tail_cache

    def l1_bound(self):
        return float(np.sum(np.abs(self.coeffs))) \
            + self._env_tail_beyond_store()

    def l1_tail(self, n0):
        """Bound for sum_{|n| > n0} |phi-hat(n)| using stored magnitudes up to
        N and the envelope beyond; O(1) within the stored range."""
        if n0 >= self.N:
            return self.env_l1_tail(n0)
        return float(self._stored_tail[n0 + 1]) \
            + self._env_tail_beyond_store()

    def weighted_norm_certificate(self):
        """Log-space account of the exp(2|n|^gamma)-weighted coefficient sum;
        see WeightedNormCertificate."""
        if self._cert is not None:
            return self._cert
        g = self.gamma
        parents = getattr(self, "_cert_parents", None)
        if parents is not None:
            # the coefficient weight is sub-multiplicative, so the weighted
            # norm of a product is at most the product of the factors' norms
            total = sum(p.weighted_norm_certificate().total_log
                        for p in parents)
            stored = _logsumexp(np.log(np.abs(self.coeffs) + 1e-320)
                                + 2.0 * np.abs(self.ns) ** g)
            self._cert = WeightedNormCertificate(
                stored, total, math.exp(min(0.0, stored - total)), self.N,
                method="algebra")
            return self._cert
        absns = np.abs(self.ns)
        stored_terms = np.log(np.abs(self.coeffs) + 1e-320) \
            + 2.0 * absns ** g
        stored_log = _logsumexp(stored_terms)
        # envelope blocks through the hump until certified geometric decay
        # walk the weighted envelope through its hump until the terms are
        # negligible AND the per-step log-slope over a whole block is
        # negative; the envelopes built here have eventually decreasing
        # log-slope, so the worst observed block slope bounds the tail
        # geometrically.
        logs = [stored_log]
        n = self.N + 1
        size = 8192
        blocks_done = 0
        tail_log = math.inf
        while n <= 3 * 10 ** 7:
            block = np.arange(n, n + size)
            lw = (self.log_env_values(block)
                  + 2.0 * block.astype(float) ** g + math.log(2.0))
            block_log = _logsumexp(lw)
            logs.append(block_log)
            slope_max = float(np.max(np.diff(lw)))
            n += size
            blocks_done += 1
            if blocks_done % 16 == 0 and size < 2 ** 18:
                size *= 2
            if slope_max < -1e-9 and block_log < max(logs) - 46.0:
                # sum_{j >= 1} exp(lw_end + j slope) closes the tail
                r = math.exp(slope_max)
                tail_log = float(lw[-1]) + slope_max - math.log1p(-r)
                break
        total_log = _logsumexp(logs + [tail_log] if tail_log < math.inf
                               else logs)
        if tail_log == math.inf:
            frac = math.inf     # walk cap hit; certificate not closed
        else:
            frac = math.exp(min(tail_log - total_log, 0.0))
        self._cert = WeightedNormCertificate(stored_log, total_log, frac, n)
        return self._cert

    def __repr__(self):
        return (f"AGammaFunction({self.name}, gamma={self.gamma}, "
                f"N={self.N})")


# -- plateau construction -----------------------------------------------------


def plateau(p, q, eps, gamma, contract_tol=1e-6, grid=2 ** 14):
    """Plateau member of the calculus algebra: 0 <= phi <= 1, supported in
    [p, q] (mod 2pi), identically 1 on [p + eps, q - eps].

    Construction: periodized indicator of [p + eps/2, q - eps/2] convolved
    with the infinite uniform-density convolution of total half-width eps/4,
    so the support and plateau margins are exact; coefficients are interval
    coefficients times sinc products.  The stated contract is verified on a
    uniform grid before returning.
    """
    if not (0.0 < p and p + eps < q - eps and q < TWO_PI and eps > 0.0):
        raise ValidationError("need 0 < p, p + eps < q - eps, q < 2pi")
    if not (LOG2_43 < gamma < 1.0):
        raise ValidationError("gamma must lie in (log2(4/3), 1)")
    gamma_prime = (1.0 + gamma) / 2.0
    s = 1.0 / gamma_prime
    c = eps / (4.0 * float(zeta(s)))
    mol = Mollifier(gamma, c)
    alpha, beta = p + eps / 2.0, q - eps / 2.0
    width = (beta - alpha) / TWO_PI

    def interval_coeff(ns):
        ns = np.asarray(ns)
        out = np.empty(ns.shape, dtype=complex)
        zero = ns == 0
        out[zero] = width
        nz = ns[~zero].astype(float)
        out[~zero] = (np.exp(-1j * nz * alpha) - np.exp(-1j * nz * beta)) \
            / (TWO_PI * 1j * nz)
        return out

    def env(n):
        n = abs(int(n))
        ib = width if n == 0 else min(width, 1.0 / (math.pi * n))
        return ib * math.exp(mol.log_env(n))

    def _log_ib(ns):
        ns = np.abs(np.asarray(ns, dtype=float))
        return np.log(np.where(ns == 0, width,
                               np.minimum(width,
                                          1.0 / (math.pi * np.maximum(ns,
                                                                      1)))))

    def log_env_vec(ns):
        return _log_ib(ns) + mol.log_env_vec(ns)

    def env_vec(ns):
        with np.errstate(under="ignore"):
            return np.exp(log_env_vec(ns))

    # synthesis range: extend until the envelope tail is negligible
    N = 512
    while True:
        probe = np.arange(N + 1, N + 4096, 7)
        tail = 2.0 * float(np.sum(env_vec(probe))) * 7
        if env(N) < 1e-13 and tail < 1e-11:
            break
        N *= 2
        if N > (grid - 1) // 2:
            N = (grid - 1) // 2
            break
    ns = np.arange(-N, N + 1)
    coeffs = interval_coeff(ns) * mol.transform(ns)
    fun = AGammaFunction(gamma, coeffs, env, env_vec=env_vec,
                         log_env_vec=log_env_vec,
                         name=f"plateau[{p},{q},{eps}]")
    vals = fun.grid_values(grid)
    if np.max(np.abs(vals.imag)) > contract_tol:
        raise ValidationError("plateau synthesis produced imaginary mass")
    xs = TWO_PI * np.arange(grid) / grid
    re = vals.real
    inside = (xs >= p + eps) & (xs <= q - eps)
    outside = (xs <= p) | (xs >= q)
    checks = {
        "plateau_dev": float(np.max(np.abs(re[inside] - 1.0))),
        "outside_dev": float(np.max(np.abs(re[outside]))),
        "lower_dev": float(max(0.0, -np.min(re))),
        "upper_dev": float(max(0.0, np.max(re) - 1.0)),
    }
    if max(checks.values()) > contract_tol:
        raise ValidationError(f"plateau contract violated: {checks}")
    fun.contract_profile = checks
    fun.interval = (p, q, eps)
    return fun


def pointwise_product(phi, psi):
    """Coefficient convolution; the calculus turns this into convolution of
    the operands' images."""
    if abs(phi.gamma - psi.gamma) > 1e-15:
        raise ValidationError("pointwise product needs a common gamma")
    coeffs = np.convolve(phi.coeffs, psi.coeffs)
    l1_phi, l1_psi = phi.l1_bound(), psi.l1_bound()

    def env(n):
        half = abs(int(n)) // 2
        return l1_phi * psi.env(half) + l1_psi * phi.env(half)

    def env_vec(ns):
        half = np.abs(np.asarray(ns)) // 2
        return (l1_phi * psi.env_values(half)
                + l1_psi * phi.env_values(half))

    def log_env_vec(ns):
        half = np.abs(np.asarray(ns)) // 2
        return np.logaddexp(math.log(l1_phi) + psi.log_env_values(half),
                            math.log(l1_psi) + phi.log_env_values(half))

    out = AGammaFunction(phi.gamma, coeffs, env, env_vec=env_vec,
                         log_env_vec=log_env_vec,
                         name=f"({phi.name})*({psi.name})", check=False)
    out.truncation_l1 = l1_phi * psi.l1_tail(psi.N) \
        + l1_psi * phi.l1_tail(phi.N)
    out._cert_parents = (phi, psi)
    return out


# -- the calculus -------------------------------------------------------------


def apply_series(phi, f, tol=1e-6, tag=NormTag("l1")):
    """phi{f} as the truncated sum over n of phi-hat(n) (e^{inf} - 1), each
    factor realized by the matrix exponential of the regular representation.

    The truncation rank N is certified: the dropped terms are bounded by
    B_K sum_{|n|>N} |phi-hat(n)| < tol in the requested norm, B_K the
    unitarity desk bound (which is what requires f self-adjoint).
    Returns (element, certified tail bound, N).
    """
    if not is_self_adjoint(f):
        raise ValidationError("apply_series needs self-adjoint f "
                              "(the unitarity tail bound fails otherwise)")
    chain = f.chain
    level = f.support_level
    B = desk_bound(chain, level, tag)
    env_tail = phi._env_tail_beyond_store()
    tails = phi._stored_tail[1:] + env_tail   # index n0: l1_tail(n0)
    ok = B * tails < tol
    if not ok.any():
        raise ValidationError("stored coefficient range cannot certify the "
                              f"requested tolerance {tol}")
    N = max(int(np.argmax(ok)), 1)
    A = regular_rep(f, level)
    eye = np.eye(A.shape[0])
    E1 = scipy.linalg.expm(1j * A)
    U = eye.astype(complex)
    S = np.zeros_like(U)
    for n in range(1, N + 1):
        U = U @ E1
        S += phi.coeff(n) * (U - eye) + phi.coeff(-n) * (U.conj().T - eye)
    out = pullback(chain, level, S)
    return out, B * phi.l1_tail(N), N


def apply_spectral(phi, f):
    """Exact oracle: eigendecompose pi(f) and apply phi to the eigenvalues
    (the representation identity realizes phi{f} through pi)."""
    chain = f.chain
    level = f.support_level
    A = regular_rep(f, level)
    if not np.array_equal(A, A.conj().T):
        raise ValidationError("apply_spectral needs self-adjoint f")
    w, V = np.linalg.eigh(A)
    scal = np.exp(1j * np.multiply.outer(w, phi.ns)) @ phi.coeffs
    M = (V * scal) @ V.conj().T
    return pullback(chain, level, M)


def approx_identity_table(chain, phi, omega, tag, g, max_level=None):
    """||phi{f_j} * g - g|| for f_j the normalized indicators of the
    descending neighborhood family K_L >= ... >= K_1 >= {e}.

    phi must take the value 1 at 1 (the indicators are idempotents with
    spectrum {0, 1}); the unit row is an exact identity.
    """
    if abs(phi.value(1.0) - 1.0) > 1e-8:
        raise ValidationError("approximate-identity calculus needs "
                              "phi(1) = 1")
    levels = max_level or min(chain.enumerated_levels, chain.levels)
    rows = []
    for j in range(levels, 0, -1):
        fj = FinSuppFun.normalized_indicator(chain, j)
        img = apply_spectral(phi, fj)
        err = norm_value(convolve(img, g) - g, tag)
        rows.append((f"K_{j}", err))
    unit = FinSuppFun.point_mass(chain)
    img = apply_spectral(phi, unit)
    rows.append(("{e}", norm_value(convolve(img, g) - g, tag)))
    return rows
