import numpy as np
import pytest

from ecflow import _kernels_numpy
from ecflow._accel import HAVE_NUMBA

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    if request.param == "numpy":
        return _kernels_numpy
    from ecflow import _kernels_numba

    return _kernels_numba


@pytest.fixture
def rng():
    return np.random.default_rng(20191211)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
