import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def make_rng(seed):
    return np.random.default_rng(seed)
