import numpy as np
import pytest

from shiftspline import CubeDomain, KernelParams


@pytest.fixture
def p22():
    """n = 2, lambda = 2, c = 1 (m = 2)."""
    return KernelParams(2, 2, 1.0)


@pytest.fixture
def unit_square():
    return CubeDomain.unit(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance(request):
    """Record one line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        return passed

    return record


_ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
