import pytest

from tarstab.innovations import Gaussian
from tarstab.streams import RandomStream

SEED = 20240917


@pytest.fixture
def stream():
    return RandomStream(SEED)


@pytest.fixture
def gaussian():
    return Gaussian()
