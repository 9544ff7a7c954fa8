"""Numba switch.

Set ``TQDCHAIN_DISABLE_NUMBA=1`` to run every kernel through its numpy
implementation instead of the compiled one.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_DISABLED = os.environ.get("TQDCHAIN_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise.

    Compiled kernels are only *selected* when ``USE_NUMBA`` is true; this
    decorator merely keeps the module importable without numba.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
