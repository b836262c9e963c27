from __future__ import annotations

import numpy as np
import pytest

from conelab.algebra import make_algebra


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["classical:3", "herm_r:3", "herm_c:3", "herm_h:2", "spin:4", "albert",
                        "sum:herm_c:2+classical:2"])
def small_alg(request):
    return make_algebra(request.param)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
