import numpy as np
import pytest

from neighbor2vec import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile (or cache-load) every kernel up front so timed tests never
    # measure JIT compilation
    kernels.warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
