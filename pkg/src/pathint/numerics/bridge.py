"""Pinned Brownian bridges by recursive midpoint construction.

Nodes are filled in breadth-first order, each from the exact conditional
Gaussian given its two already-known neighbours, so finite-dimensional
marginals carry no time-stepping bias.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .. import kernels
from .lattice import PathSample, TimeLattice
from .rng import RandomStream, block_streams

DEFAULT_BLOCK = 4096


@lru_cache(maxsize=64)
def _schedule(n_nodes: int):
    """Fill order ``(m, i, j)`` for nodes ``0..n_nodes-1`` with both ends pinned."""
    order = []
    queue = [(0, n_nodes - 1)]
    head = 0
    while head < len(queue):
        i, j = queue[head]
        head += 1
        if j - i < 2:
            continue
        m = (i + j) // 2
        order.append((m, i, j))
        queue.append((i, m))
        queue.append((m, j))
    arr = np.array(order, dtype=np.int64).reshape(-1, 3)
    return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()


def bridge_plan(nu: float, lattice: TimeLattice):
    """Schedule and conditional weights ``(m, i, j, w_i, w_j, sd)``."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    sm, si, sj = _schedule(lattice.N + 2)
    t = lattice.times
    span = t[sj] - t[si]
    w_i = (t[sj] - t[sm]) / span
    w_j = (t[sm] - t[si]) / span
    sd = np.sqrt(nu * (t[sm] - t[si]) * (t[sj] - t[sm]) / span)
    return sm, si, sj, w_i, w_j, sd


def fill_bridges(plan, x_start, x_end, z, out=None):
    """Bridges driven by standard normals ``z`` (one row per path)."""
    sm, si, sj, w_i, w_j, sd = plan
    z = np.ascontiguousarray(z, dtype=float)
    if out is None:
        out = np.empty((z.shape[0], sm.shape[0] + 2))
    kernels.active().bridge_fill(z, float(x_start), float(x_end), sm, si, sj, w_i, w_j, sd, out)
    return out


def sample_brownian_bridge(nu, lattice: TimeLattice, x_start, x_end, stream: RandomStream) -> PathSample:
    """One pinned path with diffusion ``nu``; a pure function of the stream."""
    plan = bridge_plan(nu, lattice)
    z = stream.normal((1, lattice.N))
    values = fill_bridges(plan, x_start, x_end, z)[0]
    return PathSample(lattice, values, float(nu))


def bridge_blocks(nu, lattice: TimeLattice, x_start, x_end, n_samples, stream: RandomStream,
                  block_size=DEFAULT_BLOCK, components=1):
    """Yield ``(start, stop, paths)`` blocks of independent bridges.

    With ``components > 1`` each block holds that many independent bridges
    per sample, shape ``(components, n, N+2)``; ``x_start``/``x_end`` are then
    per-component sequences. Block ``b`` always uses ``stream.substream(b)``.
    """
    plan = bridge_plan(nu, lattice)
    xs = np.broadcast_to(np.asarray(x_start, dtype=float), (components,))
    xe = np.broadcast_to(np.asarray(x_end, dtype=float), (components,))
    for start, stop, sub in block_streams(stream, n_samples, block_size):
        z = sub.normal((components, stop - start, lattice.N))
        paths = np.empty((components, stop - start, lattice.N + 2))
        for c in range(components):
            fill_bridges(plan, xs[c], xe[c], z[c], out=paths[c])
        yield start, stop, paths if components > 1 else paths[0]


def sample_bridges(nu, lattice, x_start, x_end, n_samples, stream, block_size=DEFAULT_BLOCK):
    """All bridges of :func:`bridge_blocks` stacked into one array."""
    out = np.empty((n_samples, lattice.N + 2))
    for start, stop, paths in bridge_blocks(nu, lattice, x_start, x_end, n_samples, stream, block_size):
        out[start:stop] = paths
    return out
