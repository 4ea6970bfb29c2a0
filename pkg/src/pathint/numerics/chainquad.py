"""Direct quadrature of short lattice chains with a Gaussian link envelope."""

from __future__ import annotations

import math

import numpy as np

from ..errors import QuadratureNotConverged

DEFAULT_NODES = {1: 48, 2: 24, 3: 14}
_CHUNK = 1 << 17


def _envelope(kappa, z_out, z_in, N):
    """Mean, Cholesky factor and log-mass of exp(-kappa sum |z_{l+1} - z_l|^2)."""
    dim = z_in.size
    tri = 2 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
    A = np.kron(tri, np.eye(dim))
    b = np.zeros(N * dim)
    b[:dim] += z_in
    b[-dim:] += z_out
    c = z_in @ z_in + z_out @ z_out
    mean = np.linalg.solve(A, b)
    L = np.linalg.cholesky(np.linalg.inv(2 * kappa * A))
    log_mass = -kappa * (c - b @ mean) + math.log(abs(np.linalg.det(L)))
    return mean, L, log_mass


def _tensor_sum(kappa, z_out, z_in, N, extra, n_nodes):
    dim = z_in.size
    mean, L, log_mass = _envelope(kappa, z_out, z_in, N)
    t, w = np.polynomial.hermite_e.hermegauss(n_nodes)
    n_var = N * dim
    total = 0j
    count = n_nodes**n_var
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count))
        chunk = np.stack(np.unravel_index(idx, (n_nodes,) * n_var), axis=1)
        y = mean + t[chunk] @ L.T
        wt = np.prod(w[chunk], axis=1)
        nodes = [np.broadcast_to(z_in, (len(y), dim))]
        nodes += [y[:, k * dim:(k + 1) * dim] for k in range(N)]
        nodes.append(np.broadcast_to(z_out, (len(y), dim)))
        expo = np.zeros(len(y), complex)
        for l in range(N + 1):
            expo += extra(nodes[l + 1], nodes[l])
        total += np.sum(wt * np.exp(expo))
    return complex(total * math.exp(log_mass))


def chain_quadrature(kappa, z_out, z_in, N, extra, n_nodes=None, rtol=1e-6):
    """int exp(-kappa sum_l |z_{l+1}-z_l|^2 + sum_l extra(z_{l+1}, z_l)) dz_1..dz_N.

    ``z`` lives in R^dim with the pins ``z_in = z_0`` and ``z_out = z_{N+1}``.
    Interior variables are mapped through the Cholesky factor of the link
    envelope and integrated with tensor Gauss-Hermite nodes, so ``extra``
    only needs to be smooth and of moderate growth. The rule is repeated with
    two fewer nodes per axis; disagreement beyond ``rtol`` raises
    :class:`QuadratureNotConverged`.
    """
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if not 1 <= N <= 3:
        raise ValueError("direct chain quadrature supports 1 <= N <= 3")
    z_out = np.atleast_1d(np.asarray(z_out, float))
    z_in = np.atleast_1d(np.asarray(z_in, float))
    n = n_nodes or DEFAULT_NODES[N]
    fine = _tensor_sum(kappa, z_out, z_in, N, extra, n)
    coarse = _tensor_sum(kappa, z_out, z_in, N, extra, n - 2)
    if abs(fine - coarse) > rtol * max(abs(fine), 1e-300):
        raise QuadratureNotConverged(
            f"chain quadrature moved by {abs(fine - coarse):.2e} between {n - 2} and {n} nodes"
        )
    return fine
