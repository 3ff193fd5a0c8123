import sys
from pathlib import Path

import pytest

from dispersia import (PERFECT_MIRROR, LayerStack, MaterialModel, OscillatorPolarizability,
                       QuadratureSpec)

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402


@pytest.fixture
def atom():
    """One-oscillator atom: alpha(0) = 1, resonance 1 (natural units)."""
    return OscillatorPolarizability.single(1.0, 1.0)


@pytest.fixture
def mirror():
    return LayerStack.halfspace(PERFECT_MIRROR)


@pytest.fixture
def dielectric():
    """Half-space with eps(0) = 2 and one resonance at 1."""
    return LayerStack.halfspace(MaterialModel.lorentz(2.0, 1.0))


@pytest.fixture
def tight():
    return QuadratureSpec(rel_tol=1e-10)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k[1:])):
        terminalreporter.write_line(RESULTS[key])
