"""Backend selection for the hot kernels.

Kernels are written once as plain loops over numpy arrays.  When numba is
importable and ``TANGLEDUALITY_NUMBA`` is not set to ``0`` they are compiled
with ``njit``; otherwise callers get the vectorised numpy fallbacks in
:mod:`tangleduality.kernels`.
"""

import os

_flag = os.environ.get("TANGLEDUALITY_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    if not _requested:
        raise ImportError
    import numba  # noqa: F401
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(fn):
    """Compile ``fn`` in nopython mode, caching to disk; identity without numba."""
    if not HAVE_NUMBA:
        return fn
    return _njit(cache=True, nogil=True)(fn)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
