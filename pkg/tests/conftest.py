import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracle_values

from optodm import DmModel, MembraneSpec, OpticalReadout, mode_frequency
from optodm.membrane import FUNDAMENTAL


@pytest.fixture
def spec10():
    return MembraneSpec()


@pytest.fixture
def spec20():
    return MembraneSpec(side_m=0.20)


@pytest.fixture
def readout():
    return OpticalReadout()


@pytest.fixture
def dm10(spec10):
    """Candidate sitting on the 10 cm fundamental."""
    return DmModel.from_frequency(mode_frequency(spec10, FUNDAMENTAL))


@pytest.fixture
def desk():
    """Desk-scale simulation point: lowered Q0, short coherence, raised power
    so the deconvolved floor stays thermal-dominated around the line."""
    spec = MembraneSpec(q0=1e5)
    ro = OpticalReadout(power_w=30e-3)
    dm = DmModel.from_frequency(mode_frequency(spec, FUNDAMENTAL), q_dm=300.0)
    return spec, ro, dm
