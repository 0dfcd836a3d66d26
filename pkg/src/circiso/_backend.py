"""Kernel backend selection.

``CIRCISO_BACKEND=numpy`` (or ``CIRCISO_NO_NUMBA=1``) forces the pure-numpy
kernels; otherwise numba is used when it imports.
"""

from __future__ import annotations

import importlib.util
import os

HAVE_NUMBA = importlib.util.find_spec("numba") is not None


def _initial() -> str:
    if os.environ.get("CIRCISO_NO_NUMBA", "") not in ("", "0"):
        return "numpy"
    want = os.environ.get("CIRCISO_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"CIRCISO_BACKEND must be 'numba' or 'numpy', got {want!r}")
    return want if (want == "numpy" or HAVE_NUMBA) else "numpy"


_current = _initial()


def get_backend() -> str:
    return _current


def set_backend(name: str) -> None:
    global _current
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _current = name


def use_numba() -> bool:
    return _current == "numba"
