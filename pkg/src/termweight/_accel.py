"""Backend selection for the compiled kernels.

Set ``TERMWEIGHT_NUMBA=0`` before import to force the pure-numpy path.
The numpy path is also used when numba cannot be imported.
"""
import os

_FLAG = os.environ.get("TERMWEIGHT_NUMBA", "1").strip().lower()

try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in {"0", "false", "no", "off"}


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if HAVE_NUMBA:
        return _njit(cache=True, nogil=True)(func)
    return func  # pragma: no cover


def backend():
    return "numba" if USE_NUMBA else "numpy"
