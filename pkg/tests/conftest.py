import numpy as np
import pytest

from lipnorm.config import Config


@pytest.fixture(scope="session")
def cfg():
    return Config()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260826)


def random_metric(n, rng, k=3):
    """Induced metric from random points in l_2^k (always a true metric)."""
    coords = rng.standard_normal((n, k))
    coords[0] = 0.0
    dist = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)
    return coords, dist
