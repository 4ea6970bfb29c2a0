"""Discrete stochastic integrals along phase-space paths."""

from __future__ import annotations

import math

import numpy as np

from .lattice import PhasePath


def stratonovich_p_dq(path: PhasePath) -> float:
    """Midpoint-rule ``sum 1/2 (p_{l+1} + p_l)(q_{l+1} - q_l)``.

    Summed with :func:`math.fsum`, so a path followed by its reversal gives
    exactly zero.
    """
    p, q = path.p, path.q
    if p.shape[0] < 2:
        raise ValueError("need at least two points")
    return math.fsum(0.5 * (p[1:] + p[:-1]) * (q[1:] - q[:-1]))


def ito_p_dq(path: PhasePath) -> float:
    """Left-point rule ``sum p_l (q_{l+1} - q_l)``; kept as a negative control."""
    p, q = path.p, path.q
    return math.fsum(p[:-1] * (q[1:] - q[:-1]))


def polygon_p_dq(p, q) -> float:
    """Stratonovich integral around a closed polygon given by vertex arrays."""
    p = np.append(np.asarray(p, float), p[0])
    q = np.append(np.asarray(q, float), q[0])
    return math.fsum(0.5 * (p[1:] + p[:-1]) * (q[1:] - q[:-1]))
