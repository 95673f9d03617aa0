import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fringe_psa import (  # noqa: E402
    build_linear_psa,
    build_nonlinear_psa,
    gaussian_window,
    make_profile,
    quadratic,
    square_window,
)

ACCEPTANCE_LINES = []

W0_SEC9 = 0.35 * math.pi
EPS2_SEC9 = 0.05 * W0_SEC9


@pytest.fixture
def sec9_profile():
    return make_profile(W0_SEC9, quadratic(EPS2_SEC9), 13)


@pytest.fixture
def linear4():
    return make_profile(math.pi / 2, None, 4)


@pytest.fixture
def classical4():
    return build_linear_psa(math.pi / 2, [1, 1, 1, 1])


@pytest.fixture
def gaussian_psa(sec9_profile):
    return build_nonlinear_psa(sec9_profile, gaussian_window(13, 0.1))


@pytest.fixture
def square_psa(sec9_profile):
    return build_nonlinear_psa(sec9_profile, square_window(13))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
