"""Backend switch for the compiled kernels.

Set ``GAMMAGREY_DISABLE_NUMBA=1`` to force the pure-numpy implementations.
The flag is read once at import time; :func:`set_backend` flips it later
(used by the benchmark and the backend-agreement tests).
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_FALSY = {"", "0", "false", "no", "off"}

USE_NUMBA = HAVE_NUMBA and os.environ.get("GAMMAGREY_DISABLE_NUMBA", "0").strip().lower() in _FALSY


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"`` for subsequent kernel calls."""
    global USE_NUMBA
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    USE_NUMBA = name == "numba"


def backend():
    return "numba" if USE_NUMBA else "numpy"
