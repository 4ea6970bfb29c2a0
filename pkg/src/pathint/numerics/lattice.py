"""Time lattices and discretised paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeLattice:
    """Uniform lattice with ``N`` interior nodes between ``t_start`` and ``t_end``.

    Nodes are ``t_l = t_start + l * eps`` for ``l = 0..N+1``; the two endpoint
    values of any path are pinned and only the ``N`` interior ones are
    integrated over.
    """

    t_start: float
    t_end: float
    N: int

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N must be a non-negative integer")
        object.__setattr__(self, "N", int(self.N))

    @classmethod
    def from_duration(cls, T: float, N: int) -> "TimeLattice":
        return cls(0.0, float(T), N)

    @property
    def T(self) -> float:
        return self.t_end - self.t_start

    @property
    def eps(self) -> float:
        return self.T / (self.N + 1)

    @property
    def n_links(self) -> int:
        return self.N + 1

    @property
    def times(self) -> np.ndarray:
        return self.t_start + self.eps * np.arange(self.N + 2)


@dataclass(frozen=True)
class PathSample:
    """One pinned configuration-space path on a lattice."""

    lattice: TimeLattice
    values: np.ndarray
    diffusion: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.lattice.N + 2,):
            raise ValueError("one value per lattice node required")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class PhasePath:
    """A discretised phase-space path; ``points[l] = (p_l, q_l)``."""

    lattice: TimeLattice
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must have shape (n, 2)")
        if pts.shape[0] != self.lattice.N + 2:
            raise ValueError("one point per lattice node required")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_arrays(cls, p, q, lattice=None) -> "PhasePath":
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if lattice is None:
            lattice = TimeLattice(0.0, 1.0, len(p) - 2)
        return cls(lattice, np.column_stack([p, q]))

    @property
    def p(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def q(self) -> np.ndarray:
        return self.points[:, 1]
