"""Optional numba acceleration.

Set ``ALMOST_SMOOTH_DISABLE_NUMBA=1`` to run every kernel as plain Python
(useful for debugging and for the fallback benchmark).
"""

import os

_FLAG = "ALMOST_SMOOTH_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _numba is not None and os.environ.get(_FLAG, "").strip() in ("", "0")


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        return _numba.njit(fn) if USE_NUMBA else fn

    def wrap(fn):
        return _numba.njit(**kwargs)(fn) if USE_NUMBA else fn

    return wrap
