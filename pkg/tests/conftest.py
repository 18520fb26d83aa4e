import numpy as np
import pytest

from oamem.fieldgrid import GridSpec
from oamem.polariton import MemoryParams


@pytest.fixture
def grid() -> GridSpec:
    # comfortably resolves w0 <= 250 um modes with |l| <= 2
    return GridSpec(256, 3.2e-3)


@pytest.fixture
def wide_grid() -> GridSpec:
    # fits |l| = 3 at w0 = 200 um
    return GridSpec(256, 6.4e-3)


@pytest.fixture
def params() -> MemoryParams:
    return MemoryParams()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240815)
