import math
from fractions import Fraction

import numpy as np
import pytest

import orliczlab as ol
from orliczlab import FinSuppFun, NormTag, SizeError, ValidationError


def test_convolve_unit_and_idempotent(c222, rng):
    unit = FinSuppFun.point_mass(c222)
    f = ol.random_finsupp(c222, 2, rng)
    assert ol.convolve(f, unit).allclose(f, 1e-12)
    assert ol.convolve(unit, f).allclose(f, 1e-12)
    ind = FinSuppFun.indicator(c222, 1)   # mu(K_1) = 1 makes it idempotent
    assert ol.convolve(ind, ind).allclose(ind, 1e-12)


def test_convolve_c4_counting(c4_counting):
    a = c4_counting.generator(1)
    da = FinSuppFun.delta(c4_counting, a)
    prod = ol.convolve(da, da)
    assert prod.allclose(FinSuppFun.delta(c4_counting,
                                          c4_counting.mul(a, a)), 0)


def test_convolve_chain_mismatch(c222, c23):
    with pytest.raises(ValidationError):
        ol.convolve(FinSuppFun.indicator(c222, 1),
                    FinSuppFun.indicator(c23, 1))


def test_associativity_exact_rational(c23):
    # Fraction coefficients stay exact through the dict convolution path
    rng = np.random.default_rng(3)
    def rand():
        return FinSuppFun(c23, {x: Fraction(int(rng.integers(-5, 6)), 3)
                                for x in c23.elements(2)})
    for _ in range(5):
        f, g, h = rand(), rand(), rand()
        left = ol.convolve(ol.convolve(f, g), h)
        right = ol.convolve(f, ol.convolve(g, h))
        assert left.data == right.data


def test_involution(c222, c4_counting, rng):
    a = c4_counting.generator(1)
    da = FinSuppFun.delta(c4_counting, a)
    assert ol.involution(da).allclose(
        FinSuppFun.delta(c4_counting, c4_counting.inv(a)), 0)
    sym = FinSuppFun(c222, {x: 1.5 for x in c222.elements(2)})
    assert ol.involution(sym).allclose(sym, 0)
    for _ in range(20):
        f = ol.random_finsupp(c222, 2, rng)
        g = ol.random_finsupp(c222, 2, rng)
        assert ol.involution(ol.involution(f)).allclose(f, 0)
        lhs = ol.involution(ol.convolve(f, g))
        rhs = ol.convolve(ol.involution(g), ol.involution(f))
        assert lhs.allclose(rhs, 1e-12)


def test_banach_star_isometry(c222, phi2, rng):
    w = ol.radial_weight(c222, (1.0, 2.0, 4.0))
    tags = [NormTag("l1"), NormTag("l1w", omega=w),
            NormTag("luxemburg", phi2, w), NormTag("orlicz", phi2, w)]
    for _ in range(10):
        f = ol.random_finsupp(c222, 2, rng)
        fs = ol.involution(f)
        for tag in tags:
            assert ol.norm_value(fs, tag) == pytest.approx(
                ol.norm_value(f, tag), rel=1e-10)


def test_regular_rep_unit_identity(c222):
    unit = FinSuppFun.point_mass(c222)
    M = ol.regular_rep(unit, 2)
    assert np.allclose(M, np.eye(4), atol=0)


def test_regular_rep_homomorphism(c222, rng):
    for _ in range(20):
        f = ol.random_finsupp(c222, 2, rng)
        g = ol.random_finsupp(c222, 2, rng)
        Mf, Mg = ol.regular_rep(f, 2), ol.regular_rep(g, 2)
        Mfg = ol.regular_rep(ol.convolve(f, g), 2)
        assert np.abs(Mfg - Mf @ Mg).max() <= 1e-12
        assert np.array_equal(ol.regular_rep(ol.involution(f), 2),
                              ol.regular_rep(f, 2).conj().T)


def test_regular_rep_hermitian_for_self_adjoint(c222, rng):
    f = ol.random_finsupp(c222, 2, rng, self_adjoint=True)
    M = ol.regular_rep(f)
    assert np.array_equal(M, M.conj().T)


def test_pullback_faithful(c222, rng):
    f = ol.random_finsupp(c222, 3, rng)
    M = ol.regular_rep(f, 3)
    assert ol.pullback(c222, 3, M).allclose(f, 0)


def test_regular_rep_rejects_lazy():
    lazy = ol.build_leptin_hulanicki(3, lazy=True)
    x = lazy.random_element(3, np.random.default_rng(0))
    f = FinSuppFun(lazy, {x: 1.0})
    with pytest.raises(SizeError):
        ol.regular_rep(f)


def test_spectrum_examples(c222, c4_counting):
    a = c4_counting.generator(1)
    f = FinSuppFun(c4_counting, {a: 0.5, c4_counting.inv(a): 0.5})
    spec = sorted(np.round(ol.spectrum_exact(f), 12))
    assert spec == [-1.0, 0.0, 0.0, 1.0]    # cos(2 pi k/4)
    unit = FinSuppFun.point_mass(c222)
    assert np.allclose(ol.spectrum_exact(unit, level=3), np.ones(8), atol=0)
    # indicator of K_1 at level 2: eigenvalue 1 with multiplicity [K_2:K_1]
    for orders in ((2, 2), (2, 3)):
        ch = ol.build_cyclic_sum(orders)
        spec = ol.spectrum_exact(FinSuppFun.indicator(ch, 1), level=2)
        ones = int(np.sum(spec > 0.5))
        assert ones == ch.indices[0]
        assert np.allclose(np.sort(spec)[:-ones], 0.0, atol=1e-12)


def test_gelfand_unit_and_circulant(c222, c4_counting, phi2):
    unit = FinSuppFun.point_mass(c222)
    rep = ol.gelfand_sequence(unit, NormTag("l1"), kmax=6)
    assert np.allclose(rep.values, 1.0, atol=1e-12)
    assert rep.exact_radius == 1.0
    a = c4_counting.generator(1)
    f = FinSuppFun(c4_counting, {a: 0.5, c4_counting.inv(a): 0.5})
    rep = ol.gelfand_sequence(f, NormTag("l1"), kmax=12)
    assert rep.exact_radius == pytest.approx(1.0, abs=1e-12)
    assert rep.values[-1] == pytest.approx(1.0, rel=5e-2)
    # weighted Orlicz sequence decreases toward the same radius
    w1 = ol.sharpen_p(ol.trivial_weight(c4_counting), 1.0)
    repo = ol.gelfand_sequence(f, NormTag("orlicz", phi2, w1), kmax=12)
    assert repo.values[-1] == pytest.approx(1.0, rel=5e-2)


def test_gelfand_l1_dominates_radius(c2222, rng):
    w = ol.radial_weight(c2222, (1.0, 2.0, 4.0, 8.0))
    for _ in range(10):
        f = ol.random_finsupp(c2222, 2, rng, self_adjoint=True)
        for tag in (NormTag("l1"), NormTag("l1w", omega=w)):
            rep = ol.gelfand_sequence(f, tag, kmax=8)
            assert np.all(rep.values >= rep.exact_radius - 1e-9)


def test_gelfand_homogeneity(c2222, rng):
    f = ol.random_finsupp(c2222, 2, rng, self_adjoint=True)
    r1 = ol.gelfand_sequence(f, NormTag("l1"), kmax=8)
    r3 = ol.gelfand_sequence(3.0 * f, NormTag("l1"), kmax=8)
    assert r3.exact_radius == pytest.approx(3.0 * r1.exact_radius, rel=1e-12)
    assert r3.values[-1] == pytest.approx(3.0 * r1.values[-1], rel=1e-10)


def test_spectral_consistency_catalog(c2222, c23, lh2):
    # max |eigenvalue| vs the L^1 Gelfand limit at k = 12 within 5%
    catalog = []
    for ch in (c2222, c23):
        x = ch.generators[0]
        catalog.append(FinSuppFun(ch, {x: 1.0 / ch.haar.m}))
        catalog.append((FinSuppFun.point_mass(ch, x)
                        + FinSuppFun.point_mass(ch, ch.inv(x))) * 0.5)
    x = lh2.generators[0]
    catalog.append((FinSuppFun.point_mass(lh2, x)
                    + FinSuppFun.point_mass(lh2, lh2.inv(x))) * 0.5)
    for f in catalog:
        f = (f + ol.involution(f)) * 0.5
        rep = ol.gelfand_sequence(f, NormTag("l1"), kmax=12)
        assert rep.values[-1] == pytest.approx(rep.exact_radius, rel=5e-2)


def test_u_series_idempotent(c222):
    h = FinSuppFun.indicator(c222, 1)    # normalized Haar: h * h = h
    for t in (1.0, 0.5j, 2.0 + 1.0j):
        u, bound, _ = ol.u_series(h, t, 1e-12)
        expect = (np.exp(t) - 1.0) * h
        assert ol.l1_norm(u - expect) <= bound + 1e-10
        exact = ol.u_exact(h, t)
        assert ol.l1_norm(exact - expect) <= 1e-12
    u0, b0, k0 = ol.u_series(h, 0.0, 1e-12)
    assert not u0.data and b0 == 0.0


def test_u_series_matches_exact(c222):
    rng = np.random.default_rng(3)
    f = ol.random_finsupp(c222, 2, rng, self_adjoint=True)
    tol = 1e-8
    u, bound, _ = ol.u_series(f, 5.0j, tol)
    assert bound < tol
    assert ol.l1_norm(u - ol.u_exact(f, 5.0j)) <= tol + 1e-10


def test_u_recursion(c222, rng):
    # u(nf) = n u(f) + sum_{k<n} u(kf) * u(f)
    tol = 1e-10
    for _ in range(5):
        f = ol.random_finsupp(c222, 2, rng, self_adjoint=True)
        f = f * (1.0 / ol.l1_norm(f))
        for n in (2, 3, 4):
            lhs, _, _ = ol.u_series(f, float(n), tol)
            uf, _, _ = ol.u_series(f, 1.0, tol)
            rhs = float(n) * uf
            for k in range(1, n):
                uk, _, _ = ol.u_series(f, float(k), tol)
                rhs = rhs + ol.convolve(uk, uf)
            assert ol.l1_norm(lhs - rhs) <= n * tol


def test_growth_profile(c222, rng):
    h = FinSuppFun.indicator(c222, 1)
    prof = ol.growth_profile(h, 0.5, 12)
    # |e^{in} - 1| ||h|| <= 2 ||h||: bounded uniformly
    assert np.all(prof.values <= 2.0 * ol.l1_norm(h) + 1e-12)
    assert prof.values[0] == 0.0
    f = ol.random_finsupp(c222, 2, rng, self_adjoint=True)
    prof = ol.growth_profile(f, 0.5, 16)
    assert prof.within_desk_bound
    assert np.all(prof.values <= prof.fitted_constant
                  * np.exp(2 * prof.ns ** 0.5) + 1e-9)
    with pytest.raises(ValidationError):
        ol.growth_profile(f, 0.3, 4)


def test_quasi_hermitian_sample(c2222, lh2, rng):
    for ch, lvl, n in ((c2222, 2, 60), (lh2, 1, 40)):
        for _ in range(n):
            f = ol.random_finsupp(ch, lvl, rng, self_adjoint=True)
            spec = ol.spectrum_exact(f)
            assert spec.dtype.kind == "f"      # Hermitian path, real output
            gen = ol.spectrum_general(f)
            assert np.abs(gen.imag).max() <= 1e-9


def test_inequality_suite(c222, phi2):
    w1 = ol.sharpen_p(ol.trivial_weight(c222), 1.0)
    rep = ol.inequality_suite(c222, phi2, w1, samples=100, seed=11)
    assert rep.ok
    assert rep.max_r3 <= 1 + 1e-9
    assert rep.max_rl <= 1 + 1e-9
    assert 1 - 1e-9 <= rep.min_sandwich <= rep.max_sandwich <= 2 + 1e-9
    assert not rep.exploratory


def test_inequality_suite_unit_rows(c222, phi2):
    # f = g = unit: r3 = 1/||unit||_{1,w} <= 1; x = e: rL = 1/w(e)
    w = ol.radial_weight(c222, (2.0, 3.0, 4.0))
    unit = FinSuppFun.point_mass(c222)
    n = ol.orlicz_norm(unit, phi2, w)
    r3 = ol.orlicz_norm(ol.convolve(unit, unit), phi2, w) / (
        ol.l1_norm(unit, w) * n)
    assert r3 <= 1 + 1e-9
    assert r3 == pytest.approx(1.0 / ol.l1_norm(unit, w), rel=1e-9)
    rl = ol.orlicz_norm(ol.translate(unit, c222.identity), phi2, w) / (
        w(c222.identity) * n)
    assert rl == pytest.approx(1.0 / w(c222.identity), rel=1e-9)


def test_radial_majorant(c222, rng):
    w = ol.radial_weight(c222, (1.0, 2.0, 4.0))
    unit = FinSuppFun.point_mass(c222)
    lhs, rhs = ol.radial_majorant_check(unit, w, 1)
    assert lhs <= rhs + 1e-9
    for _ in range(25):
        f = ol.random_finsupp(c222, 2, rng)
        l1, r1 = ol.radial_majorant_check(f, w, 1)
        assert l1 <= r1 + 1e-9
        l8, r8 = ol.radial_majorant_check(f, w, 8)
        assert l8 <= r8 * (1 + 1e-9) + 1e-9
