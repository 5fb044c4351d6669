import numpy as np
import pytest

import orliczlab as ol


@pytest.fixture(scope="session")
def c222():
    return ol.build_cyclic_sum((2, 2, 2))


@pytest.fixture(scope="session")
def c2222():
    return ol.build_cyclic_sum((2, 2, 2, 2))


@pytest.fixture(scope="session")
def c23():
    return ol.build_cyclic_sum((2, 3))


@pytest.fixture(scope="session")
def c4_counting():
    return ol.build_cyclic_sum((4,), normalization="counting")


@pytest.fixture(scope="session")
def lh2():
    return ol.build_leptin_hulanicki(2)


@pytest.fixture(scope="session")
def phi2():
    return ol.p_power(2)


@pytest.fixture(scope="session")
def phi3():
    return ol.p_power(3)


@pytest.fixture(scope="session")
def young_catalog():
    return [ol.p_power(2), ol.p_power(3), ol.exp_minus(), ol.cosh_minus(),
            ol.xlog()]


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
