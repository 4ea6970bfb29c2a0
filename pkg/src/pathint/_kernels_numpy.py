"""Pure-numpy reference versions of the hot Monte Carlo kernels.

Signatures mirror :mod:`pathint._kernels_numba` exactly; outputs are written
into preallocated arrays.
"""

import numpy as np

POLY = 0
TABLE = 1


def bridge_fill(z, x0, x1, sched_m, sched_i, sched_j, w_i, w_j, sd, out):
    """Recursive-midpoint Brownian bridge construction.

    ``z[:, k]`` is the standard normal used for schedule entry ``k``, which
    fills node ``sched_m[k]`` conditioned on nodes ``sched_i[k]`` and
    ``sched_j[k]``.
    """
    last = out.shape[1] - 1
    out[:, 0] = x0
    out[:, last] = x1
    for k in range(sched_m.shape[0]):
        out[:, sched_m[k]] = (
            w_i[k] * out[:, sched_i[k]] + w_j[k] * out[:, sched_j[k]] + sd[k] * z[:, k]
        )


def _potential(x, kind, coeffs, tab_x, tab_v):
    if kind == POLY:
        v = np.zeros_like(x)
        for c in coeffs[::-1]:
            v = v * x + c
        return v
    return np.interp(x, tab_x, tab_v)


def potential_action(paths, dt, kind, coeffs, tab_x, tab_v, out):
    """Trapezoidal time integral of V along each path."""
    v = _potential(paths, kind, coeffs, tab_x, tab_v)
    out[:] = dt * (v[:, 1:-1].sum(axis=1) + 0.5 * (v[:, 0] + v[:, -1]))


def _poly2(p, q, coeffs):
    # coeffs[i, j] multiplies p**i q**j
    total = np.zeros_like(p)
    for i in range(coeffs.shape[0] - 1, -1, -1):
        row = np.zeros_like(q)
        for j in range(coeffs.shape[1] - 1, -1, -1):
            row = row * q + coeffs[i, j]
        total = total * p + row
    return total


def phase_action(p, q, eps, coeffs, left_point, out):
    """Per-path ``sum p dq - eps * sum H`` on a phase-space lattice.

    ``left_point`` selects the Ito-type left-point rule for ``p dq``; the
    default midpoint rule is Stratonovich. H is always sampled at link
    midpoints.
    """
    dq = q[:, 1:] - q[:, :-1]
    pm = 0.5 * (p[:, 1:] + p[:, :-1])
    qm = 0.5 * (q[:, 1:] + q[:, :-1])
    p_rule = p[:, :-1] if left_point else pm
    out[:] = (p_rule * dq).sum(axis=1) - eps * _poly2(pm, qm, coeffs).sum(axis=1)
