import mpmath as mp
import pytest

from pbswanson.eigensystem import Flavor, build_family
from pbswanson.params import PRESETS, ModelParams, derive


@pytest.fixture(scope="session")
def fig1():
    return {name: derive(p) for name, p in PRESETS.items()}


@pytest.fixture(scope="session")
def d_b(fig1):
    return fig1["fig1-b"]


@pytest.fixture(scope="session")
def d_degenerate():
    return derive(ModelParams(0.5, 0.1, 0.3, 0.3))


@pytest.fixture(scope="session")
def families_b(d_b):
    return {fl: build_family(d_b, fl, "recursion", 60) for fl in Flavor}


@pytest.fixture
def hiprec():
    with mp.workdps(50):
        yield


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
