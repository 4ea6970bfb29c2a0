"""numba versions of the hot Monte Carlo kernels (one path per prange iteration)."""

import importlib.util
import os

import numba as nb
import numpy as np

# The bundled TBB is too old for numba and only produces a warning; prefer
# OpenMP, then the portable workqueue layer, unless the user chose one.
if "NUMBA_THREADING_LAYER" not in os.environ:
    _omp = importlib.util.find_spec("numba.np.ufunc.omppool") is not None
    nb.config.THREADING_LAYER = "omp" if _omp else "workqueue"

POLY = 0
TABLE = 1

_opts = dict(cache=True, nogil=True)


@nb.njit(parallel=True, **_opts)
def bridge_fill(z, x0, x1, sched_m, sched_i, sched_j, w_i, w_j, sd, out):
    n = out.shape[0]
    last = out.shape[1] - 1
    for s in nb.prange(n):
        out[s, 0] = x0
        out[s, last] = x1
        for k in range(sched_m.shape[0]):
            out[s, sched_m[k]] = (
                w_i[k] * out[s, sched_i[k]] + w_j[k] * out[s, sched_j[k]] + sd[k] * z[s, k]
            )


@nb.njit(**_opts)
def _interp(x, tab_x, tab_v):
    n = tab_x.shape[0]
    if x <= tab_x[0]:
        return tab_v[0]
    if x >= tab_x[n - 1]:
        return tab_v[n - 1]
    k = np.searchsorted(tab_x, x) - 1
    t = (x - tab_x[k]) / (tab_x[k + 1] - tab_x[k])
    return tab_v[k] + t * (tab_v[k + 1] - tab_v[k])


@nb.njit(parallel=True, **_opts)
def potential_action(paths, dt, kind, coeffs, tab_x, tab_v, out):
    n, m = paths.shape
    nc = coeffs.shape[0]
    # branch once per call, not per node, so the polynomial loop vectorizes
    if kind == POLY:
        for s in nb.prange(n):
            acc = 0.0
            for k in range(m):
                x = paths[s, k]
                v = 0.0
                for c in range(nc - 1, -1, -1):
                    v = v * x + coeffs[c]
                acc += 0.5 * v if k == 0 or k == m - 1 else v
            out[s] = dt * acc
    else:
        for s in nb.prange(n):
            acc = 0.5 * (_interp(paths[s, 0], tab_x, tab_v) + _interp(paths[s, m - 1], tab_x, tab_v))
            for k in range(1, m - 1):
                acc += _interp(paths[s, k], tab_x, tab_v)
            out[s] = dt * acc


@nb.njit(**_opts)
def _poly2(p, q, coeffs):
    total = 0.0
    for i in range(coeffs.shape[0] - 1, -1, -1):
        row = 0.0
        for j in range(coeffs.shape[1] - 1, -1, -1):
            row = row * q + coeffs[i, j]
        total = total * p + row
    return total


@nb.njit(parallel=True, **_opts)
def phase_action(p, q, eps, coeffs, left_point, out):
    n, m = p.shape
    for s in nb.prange(n):
        pdq = 0.0
        h = 0.0
        for k in range(m - 1):
            dq = q[s, k + 1] - q[s, k]
            pm = 0.5 * (p[s, k + 1] + p[s, k])
            qm = 0.5 * (q[s, k + 1] + q[s, k])
            pdq += (p[s, k] if left_point else pm) * dq
            h += _poly2(pm, qm, coeffs)
        out[s] = pdq - eps * h
