import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gyrostat import GravityParams, InertiaParams, Se3RotorState, So3RotorState


@pytest.fixture
def std_params():
    return InertiaParams(i_bar=(3.0, 2.0, 1.0), j3=1.0)


@pytest.fixture
def std_grav():
    return GravityParams(mgh=2.0, chi=(0.0, 0.0, 1.0))


@pytest.fixture
def std_so3_state():
    return So3RotorState(pi=(1.0, 2.0, 3.0), alpha=0.0, l=0.5)


@pytest.fixture
def std_se3_state():
    return Se3RotorState(
        pi=(1.0, 2.0, 3.0), gamma=(1.0, 0.0, 0.0), alpha=0.0, l=0.5
    )


@pytest.fixture
def axisym_params():
    return InertiaParams(i_bar=(2.0, 2.0, 1.0), j3=1.0)
