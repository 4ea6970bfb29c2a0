import numpy as np
import pytest

from pathint import kernels


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    """Run a test once per kernel backend, restoring the default afterwards."""
    kernels.use(request.param)
    yield request.param
    kernels.use(None)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
