import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from evidential_markov.calibration import fit_experiment  # noqa: E402
from evidential_markov.config import RunConfig  # noqa: E402
from evidential_markov.datasets import AVERAGE_NARROW, BUNDLED, NARROW  # noqa: E402
from evidential_markov.experiments import run_table3  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def townsend_fit():
    """Parameters fitted to the published Townsend narrow-face masses."""
    return fit_experiment(NARROW[0])


@pytest.fixture(scope="session")
def narrow_table():
    """Per-experiment fits for the five narrow experiments and the average."""
    return run_table3(list(NARROW) + [AVERAGE_NARROW], RunConfig())


@pytest.fixture(scope="session")
def bundled_gamma_zero():
    """Every bundled record fitted and run with the extra uncertainty forced to 0."""
    return run_table3(BUNDLED, RunConfig(gamma_zero=True))


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
