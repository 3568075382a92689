import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import ep_H1, hh_H1  # noqa: E402

from hamnf.averaging import FrequencyData  # noqa: E402
from hamnf.normalform import PerturbedHamiltonian, second_order_nf  # noqa: E402


@pytest.fixture(scope="session")
def freq11():
    return FrequencyData((1, 1))


@pytest.fixture(scope="session")
def henon_heiles(freq11):
    return PerturbedHamiltonian(freq11, hh_H1())


@pytest.fixture(scope="session")
def elastic_pendulum(freq11):
    return PerturbedHamiltonian(freq11, ep_H1())


@pytest.fixture(scope="session")
def hh_result(henon_heiles):
    return second_order_nf(henon_heiles)


@pytest.fixture(scope="session")
def ep_result(elastic_pendulum):
    return second_order_nf(elastic_pendulum)


ACCEPTANCE_LINES = []


def record(criterion: str, ok: bool, detail: str = ""):
    """Log an acceptance outcome; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
