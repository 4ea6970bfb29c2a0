"""Kernel backend selection.

``PATHINT_BACKEND=numpy`` forces the pure-numpy kernels; the default is numba
when it imports, numpy otherwise. ``PATHINT_THREADS`` caps numba threads.
"""

from __future__ import annotations

import os
import warnings

_VALID = ("numba", "numpy")


def requested_backend() -> str:
    name = os.environ.get("PATHINT_BACKEND", "numba").strip().lower()
    if name not in _VALID:
        raise ValueError(f"PATHINT_BACKEND must be one of {_VALID}, got {name!r}")
    return name


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(name: str | None = None) -> str:
    name = requested_backend() if name is None else name
    if name == "numba" and not numba_available():
        return "numpy"
    return name


def set_threads(n: int | None):
    """Cap numba's thread pool; ``None`` falls back to ``PATHINT_THREADS``."""
    if n is None:
        env = os.environ.get("PATHINT_THREADS")
        n = int(env) if env else None
    if n is None or not numba_available():
        return
    import numba

    with warnings.catch_warnings():
        # numba probes TBB when its pool starts and warns about old versions
        warnings.filterwarnings("ignore", message=".*TBB.*")
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
