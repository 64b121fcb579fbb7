"""Numba switch for the hot kernels.

Set ``SUPERBUBBLE_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. The same source is used for both paths.
"""
import os

_DISABLED = os.environ.get("SUPERBUBBLE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("disabled by SUPERBUBBLE_DISABLE_NUMBA")
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "python"


def jit(fn):
    """Compile ``fn`` in nopython mode when numba is active, else return it unchanged."""
    if HAS_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn
