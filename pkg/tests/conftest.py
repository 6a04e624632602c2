import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from coarse.metric import FiniteMetricSpace

settings.register_profile("coarse", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("coarse")


def line(n: int, lo: int = 0) -> FiniteMetricSpace:
    """Points lo, lo+1, ..., lo+n-1 on the real line."""
    return FiniteMetricSpace.from_points(np.arange(lo, lo + n, dtype=float)[:, None], metric="l1")


def random_space(seed: int, n: int, dim: int = 2, box: float = 10.0) -> FiniteMetricSpace:
    rng = np.random.default_rng(seed)
    return FiniteMetricSpace.from_points(rng.uniform(0, box, size=(n, dim)))


@pytest.fixture
def small_line():
    return line(11)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
