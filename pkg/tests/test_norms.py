import math

import numpy as np
import pytest

import orliczlab as ol
from orliczlab import FinSuppFun, UnsupportedYoungError, ValidationError


def test_l1_norm_examples(c222):
    assert ol.l1_norm(FinSuppFun.indicator(c222, 1)) == 1.0
    assert ol.l1_norm(FinSuppFun.delta(c222, c222.identity)) == 0.5
    assert ol.l1_norm(FinSuppFun(c222, {})) == 0.0


def test_luxemburg_indicator(c222, phi2, phi3):
    ind = FinSuppFun.indicator(c222, 1)
    # closed form 1/Phi^{-1}(1/mu(K_1)) frozen from the bisection oracle
    assert ol.luxemburg_norm(ind, phi2) == pytest.approx(
        0.7071067811865476, rel=5e-12)
    assert ol.luxemburg_norm(ind, phi3) == pytest.approx(
        0.6933612743506347, rel=5e-12)
    assert ol.luxemburg_norm(FinSuppFun(c222, {}), phi2) == 0.0


def test_luxemburg_constraint_satisfied(c222, phi2, rng):
    m = c222.haar.m
    for _ in range(50):
        f = ol.random_finsupp(c222, 2, rng)
        k = ol.luxemburg_norm(f, phi2)
        budget = m * float(np.sum(phi2(
            np.abs(f.vector(2)) / k)))
        assert budget <= 1.0 + 1e-10
        assert abs(budget - 1.0) <= 1e-10


def test_luxemburg_rejects_infinite_young(c222):
    psi1 = ol.p_power(1).conjugate()
    with pytest.raises(UnsupportedYoungError):
        ol.luxemburg_norm(FinSuppFun.indicator(c222, 1), psi1)


def test_orlicz_indicator_amemiya(c222, phi2):
    ind = FinSuppFun.indicator(c222, 1)
    # minimize (1 + k^2/2)/k analytically: k = sqrt(2), value sqrt(2)
    assert ol.orlicz_norm(ind, phi2) == pytest.approx(
        math.sqrt(2.0), rel=1e-9)
    assert ol.orlicz_norm(FinSuppFun(c222, {}), phi2) == 0.0


def test_sandwich_and_dual_oracle(c222, phi2):
    rng = np.random.default_rng(42)
    for _ in range(25):
        f = ol.random_finsupp(c222, 2, rng)
        lux = ol.luxemburg_norm(f, phi2)
        orl = ol.orlicz_norm(f, phi2)
        assert 1.0 - 1e-9 <= orl / lux <= 2.0 + 1e-9
        dual = ol.orlicz_norm_dual_sample(f, phi2, trials=32, seed=1)
        assert dual <= orl + 1e-9
        assert dual >= orl * 0.99          # sampled sup within 1%


def test_holder_sides(c222, phi2):
    ind = FinSuppFun.indicator(c222, 1)
    lhs, rhs = ol.holder_sides(ind, ind, phi2)
    assert lhs == pytest.approx(1.0, abs=1e-12)
    assert rhs == pytest.approx(1.0, rel=1e-9)
    assert lhs <= rhs + 1e-9
    zero = FinSuppFun(c222, {})
    assert ol.holder_sides(ind, zero, phi2) == (0.0, 0.0)
    rng = np.random.default_rng(7)
    for _ in range(100):
        f = ol.random_finsupp(c222, 2, rng)
        g = ol.random_finsupp(c222, 2, rng)
        lhs, rhs = ol.holder_sides(f, g, phi2)
        assert lhs <= rhs + 1e-9


def test_norm_axioms(c222, young_catalog, rng):
    for phi in young_catalog:
        if not phi.solver_ok:
            continue
        for _ in range(20):
            f = ol.random_finsupp(c222, 2, rng)
            g = ol.random_finsupp(c222, 2, rng)
            c = complex(rng.standard_normal(), rng.standard_normal())
            for norm in (ol.luxemburg_norm, ol.orlicz_norm):
                nf, ng = norm(f, phi), norm(g, phi)
                assert norm(c * f, phi) == pytest.approx(
                    abs(c) * nf, rel=1e-10, abs=1e-12)
                assert norm(f + g, phi) <= nf + ng + 1e-9


def test_luxemburg_monotone(c222, phi2, rng):
    for _ in range(50):
        f = ol.random_finsupp(c222, 2, rng)
        g = FinSuppFun(c222, {x: abs(v) + rng.random()
                              for x, v in f.data.items()})
        assert ol.luxemburg_norm(f, phi2) <= \
            ol.luxemburg_norm(g, phi2) + 1e-10


def test_weighted_norm_is_product_path(c222, phi2, rng):
    w = ol.radial_weight(c222, (1.0, 2.0, 4.0))
    for _ in range(10):
        f = ol.random_finsupp(c222, 3, rng)
        fw = f.pointwise_mul(w)
        assert ol.l1_norm(f, w) == ol.l1_norm(fw)
        assert ol.luxemburg_norm(f, phi2, w) == ol.luxemburg_norm(fw, phi2)
        assert ol.orlicz_norm(f, phi2, w) == ol.orlicz_norm(fw, phi2)


def test_embedding_ratio_bound(c222, phi2):
    # ||f||_1 <= 2 N_Psi(1/w restricted to the support level) ||f||_{Phi,w}
    w = ol.sharpen_p(ol.trivial_weight(c222), 1.0)
    psi = phi2.conjugate()
    inv_w = FinSuppFun(c222, {x: 1.0 / w(x) for x in c222.elements(2)})
    bound = 2.0 * ol.luxemburg_norm(inv_w, psi)
    rng = np.random.default_rng(99)
    for _ in range(1000):
        f = ol.random_finsupp(c222, 2, rng)
        ratio = ol.l1_norm(f) / ol.orlicz_norm(f, phi2, w)
        assert ratio <= bound + 1e-9


def test_support_level_and_chain_mismatch(c222, c23):
    f = FinSuppFun.indicator(c222, 2)
    assert f.support_level == 2
    assert FinSuppFun(c222, {}).support_level == 1
    g = FinSuppFun.indicator(c23, 1)
    with pytest.raises(ValidationError):
        f + g
