"""Kernel backend selection.

``PKEET_BACKEND=numpy`` forces the pure-numpy kernels even when numba is
importable; ``PKEET_BACKEND=numba`` makes a missing numba an import error.
"""

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _select() -> str:
    requested = os.environ.get("PKEET_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if requested not in ("numba", "numpy"):
        raise ImportError(f"PKEET_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAS_NUMBA:
        raise ImportError("PKEET_BACKEND=numba but numba is not installed")
    return requested


BACKEND = _select()
