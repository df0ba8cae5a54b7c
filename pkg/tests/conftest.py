import numpy as np
import pytest

from hotelling.density import PiecewisePolyDensity, random_density, sawtooth_witness, uniform


def two_block():
    """f = 2 on [0, 1/4], 2/3 on [1/4, 1]."""
    return PiecewisePolyDensity(((0.0, 0.25, 2.0, 2.0), (0.25, 1.0, 2 / 3, 2 / 3)), name="two-block")


def spiky_density(seed):
    """Random piecewise-constant density on random knots with heavy contrast."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 16))
    vals = rng.random(k) ** int(rng.integers(1, 10)) + 1e-3
    knots = np.sort(np.concatenate([[0, 1], rng.random(k - 1)]))
    vals = vals / np.sum(vals * np.diff(knots))
    return PiecewisePolyDensity(tuple((knots[i], knots[i + 1], vals[i], vals[i]) for i in range(k)))


def with_gap():
    """Zero density on [0.3, 0.6]: exercises the leftmost-cut convention."""
    return PiecewisePolyDensity(((0.0, 0.3, 1.0, 1.5), (0.3, 0.6, 0.0, 0.0), (0.6, 1.0, 1.5, 1.625)))


def random_pool(n, seed=0):
    return [random_density(seed * 10_000 + t, 1 + t % 7) for t in range(n)]


@pytest.fixture
def saw():
    return sawtooth_witness()


@pytest.fixture
def unif():
    return uniform()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
