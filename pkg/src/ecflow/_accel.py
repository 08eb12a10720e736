"""Numba availability and the switch between compiled and numpy kernels.

Set ``ECFLOW_DISABLE_NUMBA=1`` to force the pure-numpy path even when numba
is installed. The flag is read once, at import time.
"""
import os


def _noop_jit(f=None, **kwargs):
    if f is None:
        return lambda g: g
    return f


def _have_numba():
    try:
        import numba  # noqa: F401

        return True
    except ImportError:
        return False


HAVE_NUMBA = _have_numba()
DISABLED = os.environ.get("ECFLOW_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}
USE_NUMBA = HAVE_NUMBA and not DISABLED

if HAVE_NUMBA:
    from numba import njit
else:
    njit = _noop_jit
