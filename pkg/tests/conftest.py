import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bestinv.constants import ALPHA  # noqa: E402


@pytest.fixture
def identity3():
    return np.array([[1, 0], [0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def alpha():
    return ALPHA
