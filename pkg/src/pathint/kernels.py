"""Dispatch to the numba or numpy implementation of the hot kernels."""

from __future__ import annotations

import importlib

from ._backend import resolve_backend

_MODULES = {"numba": "pathint._kernels_numba", "numpy": "pathint._kernels_numpy"}
_active = None


def get_kernels(name: str | None = None):
    """Kernel module for ``name`` (default: the env-selected backend)."""
    return importlib.import_module(_MODULES[resolve_backend(name)])


def active():
    global _active
    if _active is None:
        _active = get_kernels()
    return _active


def backend_name() -> str:
    return "numba" if active().__name__.endswith("numba") else "numpy"


def use(name: str | None):
    """Switch the process-wide backend; ``None`` re-reads the environment."""
    global _active
    _active = get_kernels(name)
