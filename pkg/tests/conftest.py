import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import hsltori as h

settings.register_profile(
    "hsltori", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("hsltori")

SQUARE = (1.0, 1j)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def torus(beta0, seed=0, lattice=SQUARE, t=None):
    return h.immersion_from_config(lattice[0], lattice[1], beta0, t=t, seed=seed)


def random_t(rng, n):
    t = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return t / np.linalg.norm(t)


def synthetic_roots(rng, n):
    """Random antipodal unit-circle roots away from +-1 and each other."""
    while True:
        ang = np.sort(rng.uniform(0.05, np.pi - 0.05, n // 2))
        if n == 2 or np.min(np.diff(ang)) > 0.1:
            s = np.exp(1j * ang)
            return h.SpectralRoots(np.concatenate([s, -s]))


@pytest.fixture
def square_2():
    return torus(2, seed=1)


@pytest.fixture
def square_13():
    return torus(1 + 3j, seed=1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in mod.CRITERIA:
        if cid in mod.RESULTS:
            terminalreporter.write_line(mod.RESULTS[cid])
