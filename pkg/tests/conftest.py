import numpy as np
import pytest
from hypothesis import settings
from scipy import linalg

from brake_index.symplectic import standard_J

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


def random_symplectic(rng, n, scale=1.0):
    """``expm(J S)`` for a random symmetric S."""
    a = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return linalg.expm(standard_J(n) @ (0.5 * (a + a.T)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
