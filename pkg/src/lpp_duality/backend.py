"""Kernel backend selection.

LPP_DUALITY_BACKEND chooses the kernel implementation: "numba" (default
when importable) or "numpy".  Both expose the same functions with the same
conventions; see benchmarks/bench_backends.py for the speed gap.
"""

from __future__ import annotations

import os

from .errors import DomainError

_CACHE: dict[str, object] = {}


def _load(name: str):
    if name not in _CACHE:
        if name == "numba":
            from . import kernels_numba as mod
        elif name == "numpy":
            from . import kernels_numpy as mod
        else:
            raise DomainError(f"unknown backend {name!r}; use 'numba' or 'numpy'")
        _CACHE[name] = mod
    return _CACHE[name]


def backend_name() -> str:
    name = os.environ.get("LPP_DUALITY_BACKEND", "auto").strip().lower() or "auto"
    if name != "auto":
        return name
    try:
        _load("numba")
        return "numba"
    except ImportError:
        return "numpy"


def kernels():
    """The active kernel module (re-resolved per call so tests can switch)."""
    return _load(backend_name())
