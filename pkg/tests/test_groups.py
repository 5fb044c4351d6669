import numpy as np
import pytest
from fractions import Fraction

import orliczlab as ol
from orliczlab import SizeError, ValidationError


def test_cyclic_sum_counting():
    ch = ol.build_cyclic_sum((2, 3))
    assert ch.sizes == (2, 6)
    assert ch.indices == (3,)
    ch = ol.build_cyclic_sum((1, 2, 3, 4))
    assert ch.size(ch.levels) == 24
    assert ch.indices == (2, 3, 4)
    ch = ol.build_cyclic_sum((2, 2, 2))
    assert ch.indices == (2, 2)   # already a standard decomposition


def test_cyclic_sum_validation():
    with pytest.raises(ValidationError):
        ol.build_cyclic_sum((2, 0, 3))
    with pytest.raises(SizeError):
        ol.build_cyclic_sum((2,) * 21)      # 2^21 over the cap
    ch = ol.build_cyclic_sum((2,) * 21, lazy=True)
    assert ch.levels == 21 and ch.enumerated_levels == 20
    with pytest.raises(SizeError):
        ch.elements(21)
    with pytest.raises(ValidationError):
        ol.build_cyclic_sum((2, 1, 3))      # interior trivial factor


def test_leptin_hulanicki_orders():
    lh1 = ol.build_leptin_hulanicki(1)
    assert lh1.size(1) == 8                 # |H|^|H| * |H| = 2^3
    lh2 = ol.build_leptin_hulanicki(2)
    assert lh2.sizes == (8, 1024)           # 2^(2*4+2)
    assert lh2.indices == (128,)
    assert lh2.identity == (0, (0, 0, 0, 0))
    assert lh2.level(lh2.identity) == 1
    with pytest.raises(SizeError):
        ol.build_leptin_hulanicki(3)
    lazy = ol.build_leptin_hulanicki(3, lazy=True)
    assert lazy.enumerated_levels == 2
    x = lazy.random_element(3, np.random.default_rng(1))
    assert lazy.mul(x, lazy.inv(x)) == lazy.identity
    with pytest.raises(SizeError):
        lazy.elements(3)


@pytest.mark.parametrize("make", [
    lambda: ol.build_cyclic_sum((2, 3)),
    lambda: ol.build_leptin_hulanicki(2),
])
def test_group_laws_sampled(make):
    ch = make()
    rng = np.random.default_rng(123)
    lvl = ch.enumerated_levels
    e = ch.identity
    for _ in range(1000):
        x = ch.random_element(lvl, rng)
        y = ch.random_element(lvl, rng)
        z = ch.random_element(lvl, rng)
        assert ch.mul(ch.mul(x, y), z) == ch.mul(x, ch.mul(y, z))
        assert ch.inv(ch.mul(x, y)) == ch.mul(ch.inv(y), ch.inv(x))
        assert ch.mul(x, e) == x and ch.mul(e, x) == x
        assert ch.mul(x, ch.inv(x)) == e


def test_level_monotone_under_mul(c222, lh2):
    for ch in (c222, lh2):
        lvl = min(ch.enumerated_levels, 2)
        els = list(ch.elements(lvl))
        if len(els) > 64:
            rng = np.random.default_rng(5)
            els = [ch.random_element(lvl, rng) for _ in range(64)]
        for x in els:
            assert ch.level(ch.inv(x)) == ch.level(x)
            for y in els:
                assert ch.level(ch.mul(x, y)) <= max(ch.level(x),
                                                     ch.level(y))
    assert c222.level(c222.identity) == 1


def test_pair_tables_match_operations(c23, lh2):
    for ch in (c23, lh2):
        lvl = 1 if ch is lh2 else ch.levels
        els = list(ch.elements(lvl))
        C = ch.pair_table(lvl, "conv")
        R = ch.pair_table(lvl, "rep")
        M = ch.pair_table(lvl, "mul")
        for a, x in enumerate(els):
            for b, y in enumerate(els):
                assert C[a, b] == ch.element_index(ch.mul(ch.inv(x), y))
                assert R[a, b] == ch.element_index(ch.mul(x, ch.inv(y)))
                assert M[a, b] == ch.element_index(ch.mul(x, y))


def test_standardize():
    ch = ol.build_cyclic_sum((2, 2, 3, 4))
    st = ol.standardize(ch)
    assert st.indices == (2, 3, 4)          # unchanged
    ch = ol.build_cyclic_sum((2, 4, 2, 3))
    st = ol.standardize(ch)
    assert st.indices == (4, 6)             # merge the (2, 3) step
    ch = ol.build_cyclic_sum((2, 8, 2))
    st = ol.standardize(ch)
    assert st.indices == (16,)              # tail merged into the last step
    with pytest.raises(ValidationError):
        ol.standardize(ol.build_cyclic_sum((4,)))


def test_standardize_preserves_union_and_base():
    ch = ol.build_cyclic_sum((2, 4, 2, 3))
    st = ol.standardize(ch)
    assert st.size(st.levels) == ch.size(ch.levels)
    assert st.size(1) == ch.size(1)
    assert list(st.elements(st.levels)) == list(ch.elements(ch.levels))
    assert all(d1 <= d2 for d1, d2 in zip(st.indices, st.indices[1:]))


def test_shell_measures():
    ch = ol.build_cyclic_sum((2, 2, 2))
    assert ol.shell_measures(ch) == (Fraction(1), Fraction(1), Fraction(2))
    sm = ol.ShellModel((3, 3, 3, 3))
    assert ol.shell_measures(sm) == (Fraction(1), Fraction(2), Fraction(6),
                                     Fraction(18), Fraction(54))
    # partial sums reproduce mu(K_i) exactly; every shell >= 1
    shells = ol.shell_measures(ch)
    acc = Fraction(0)
    for i, s in enumerate(shells, start=1):
        assert s >= 1
        acc += s
        assert acc == ch.measure(i)


def test_haar_normalizations():
    ch = ol.build_cyclic_sum((2, 2), normalization="counting")
    assert ch.haar.point_mass == 1
    assert ch.measure(2) == 4
    ch = ol.build_cyclic_sum((2, 2))
    assert ch.haar.point_mass == Fraction(1, 2)
    assert ch.measure(1) == 1


def test_shell_model_bounded_index():
    sm = ol.ShellModel((2, 3), tail_index=3)
    assert sm.bounded_index and sm.index_bound == 3
    assert sm.index(10) == 3
    sm2 = ol.ShellModel((2, 3))
    assert not sm2.bounded_index
    with pytest.raises(ValidationError):
        sm2.index(5)
    with pytest.raises(ValidationError):
        ol.ShellModel((1, 2))


def test_cyclic_generators():
    ch = ol.build_cyclic_sum((1, 2, 3))
    assert len(ch.generators) == 2          # trivial factor contributes none
    x2 = ch.generator(2)
    assert ch.mul(x2, x2) == ch.identity
    x3 = ch.generator(3)
    assert ch.power(x3, 3) == ch.identity and ch.power(x3, 2) != ch.identity
    with pytest.raises(ValidationError):
        ch.generator(1)


def test_lh_generators_generate_subgroup(lh2):
    seen = {lh2.identity}
    frontier = [lh2.identity]
    gens = [g for g in lh2.generators if lh2.level(g) == 1]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = lh2.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert len(seen) == 8                   # level-1 generators span K_1
