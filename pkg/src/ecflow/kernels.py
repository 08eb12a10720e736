"""Kernel dispatch: numba when available and not disabled, numpy otherwise."""
from ._accel import USE_NUMBA
from . import _kernels_numpy as numpy_backend

if USE_NUMBA:
    from . import _kernels_numba as backend
else:
    backend = numpy_backend

BACKEND = "numba" if USE_NUMBA else "numpy"

scaled_esp = backend.scaled_esp
count_components_batch = backend.count_components_batch
c_series = backend.c_series
