import sys

import numpy as np
import pytest

from pbergman.domains import Annulus, PuncturedDisc, UnitDisc


@pytest.fixture
def disc():
    return UnitDisc()


@pytest.fixture
def annulus():
    return Annulus(0.5)


@pytest.fixture
def punctured():
    return PuncturedDisc()


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(42)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
