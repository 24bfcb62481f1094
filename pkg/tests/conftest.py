import pytest
from hypothesis import HealthCheck, settings

from hororadon import suites
from hororadon import transforms as tr

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def norm() -> tr.MeasureNormalization:
    """Measure constants without kappa calibration (kappa = 1 in theory)."""
    c_N, _ = tr.compute_c_N()
    return tr.MeasureNormalization(c_N, tr.compute_c_A(), 1.0)


@pytest.fixture(scope="session")
def small_grid() -> tr.TransformGrid:
    """Default tau and lambda sampling with a coarse angular grid, for quick tests."""
    return tr.TransformGrid(n_beta=32, n_beta_spectral=8)


@pytest.fixture(scope="session")
def default_context() -> suites.Context:
    return suites.Context(suites.RunConfig())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
