import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def random_vec(rng, n, field):
    x = rng.standard_normal(n)
    if field == "complex":
        return x + 1j * rng.standard_normal(n)
    return x
