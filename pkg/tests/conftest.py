import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

U32 = 2.0**-24
U64 = 2.0**-53
DELTA = 1e-16


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240831)


def random_pair_f32(rng, n, scale=1.0):
    x = (scale * rng.standard_normal(n)).astype(np.float32)
    y = (scale * rng.standard_normal(n)).astype(np.float32)
    return x, y
