import numpy as np
import pytest

from hckit.heisenberg import HPoint


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hpoints(rng, n, scale=1.0):
    x, y, t = rng.uniform(-scale, scale, size=(3, n))
    return HPoint.from_xyt(x, y, t)


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record the outcome line of an acceptance criterion and return whether it passed."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
