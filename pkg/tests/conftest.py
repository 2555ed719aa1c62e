import random

import pytest
from mpmath import mp

from dft_hermite import IndexSet, PeriodicVector, PrecisionContext


@pytest.fixture(scope="session", autouse=True)
def _test_precision():
    """Run test-level arithmetic at 130 digits so reference constants are
    at least as accurate as anything the library computes at <= 120."""
    with mp.workdps(130):
        yield


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ctx100():
    return PrecisionContext(digits=100)


@pytest.fixture
def ctx120():
    return PrecisionContext(digits=120)


def random_vector(n_dim: int, seed: int, complex_entries: bool = False) -> PeriodicVector:
    """Deterministic pseudo-random test vector with entries in [-1, 1]."""
    rng = random.Random(seed)
    idx = IndexSet(n_dim)
    if complex_entries:
        vals = [mp.mpc(2 * rng.random() - 1, 2 * rng.random() - 1) for _ in range(n_dim)]
    else:
        vals = [mp.mpf(2 * rng.random() - 1) for _ in range(n_dim)]
    return PeriodicVector(idx, vals)


def symmetrized(vec: PeriodicVector, odd: bool) -> PeriodicVector:
    """Project a real vector onto its exactly even or odd part."""
    sign = -1 if odd else 1
    return PeriodicVector.from_function(
        vec.index, lambda k: (vec[k] + sign * vec[-k]) / 2)
