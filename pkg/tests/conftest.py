import numpy as np
import pytest
from hypothesis import settings

from linpovm.modes import BeamSplitter, OpticalCircuit, compose_circuit

settings.register_profile("ci", max_examples=50, deadline=None)
settings.load_profile("ci")

QUARTER = np.pi / 4


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def bell_analyzer_circuit():
    return OpticalCircuit(4, [BeamSplitter(1, 3, QUARTER, 0.0), BeamSplitter(2, 4, QUARTER, 0.0)])


@pytest.fixture
def bell_analyzer(bell_analyzer_circuit):
    return compose_circuit(bell_analyzer_circuit)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
