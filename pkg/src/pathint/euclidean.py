"""Imaginary-time side: heat kernels, Feynman-Kac weighting, Cameron's diagnostic."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GridTruncationWarning
from .numerics.amplitude import INV_SQRT_LENGTH, ComplexAmplitude
from .numerics.bridge import DEFAULT_BLOCK, bridge_blocks
from .numerics.estimate import PropagatorEstimate, mean_and_stderr
from .numerics.gaussian import GaussianKernel, compose_power
from .numerics.lattice import TimeLattice
from .numerics.rng import RandomStream
from .oracles.closed_form import heat_kernel
from .realtime import KernelMatrix, PotentialSpec, WavefunctionGrid, _boundary_check


def _check_bounded(V: PotentialSpec, x):
    if V.is_polynomial and V.minimum() == -math.inf:
        raise ValueError("potential must be bounded below")
    return V(x)


def fk_transfer_matrix(V: PotentialSpec, nu, lat: TimeLattice, grid: WavefunctionGrid, check=True) -> KernelMatrix:
    """Imaginary-time lattice kernel by repeated transfer-matrix application.

    Each link is a heat-kernel step of duration eps times e^{-eps V} at its
    earlier (left) node; interior nodes carry trapezoid weights.
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    x = grid.x
    v = _check_bounded(V, x)
    eps = lat.eps
    ratio = grid.dx / math.sqrt(nu * eps)
    if ratio > 1.0:
        warnings.warn(f"grid spacing is {ratio:.2f} heat-kernel widths; refine the grid",
                      GridTruncationWarning, stacklevel=2)
    link = np.exp(-((x[:, None] - x[None, :]) ** 2) / (2 * nu * eps) - eps * v[None, :])
    link /= math.sqrt(2 * math.pi * nu * eps)
    out = link
    w = grid.weights
    for _ in range(lat.N):
        out = link @ (w[:, None] * out)
    meta = {"scheme": "fk-transfer", "N": lat.N, "eps": eps, "nu": nu, "placement": "left", "dx_over_width": ratio}
    if check:
        meta["boundary_ratio"] = _boundary_check(out)
    return KernelMatrix(out, grid, meta)


def apply_euclidean_propagator(W: KernelMatrix, rho: WavefunctionGrid) -> WavefunctionGrid:
    """rho(x'') = int W(x'', x') rho(x') dx' by trapezoidal quadrature."""
    if rho.n_points != W.grid.n_points or rho.x_min != W.grid.x_min or rho.x_max != W.grid.x_max:
        raise ValueError("kernel and density grids differ")
    out = W.matrix @ (W.grid.weights * rho.values)
    if np.isrealobj(W.matrix) and np.all(np.imag(rho.values) == 0):
        out = out.real
    return rho.with_values(out)


def fk_bridge_mc(V: PotentialSpec, nu, T, x2, x1, n_steps, n_samples, stream: RandomStream,
                 block_size=DEFAULT_BLOCK) -> PropagatorEstimate:
    """heat_kernel(x2, x1) times the bridge average of exp(-int V dt).

    ``n_steps`` is the number of time intervals; the time integral uses the
    trapezoid rule on the bridge nodes. Blocks are keyed by substreams so the
    result is independent of scheduling.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    lat = TimeLattice(0.0, T, n_steps - 1)
    kind, coeffs, tx, tv = V.kernel_args()
    if V.is_polynomial and V.minimum() == -math.inf:
        raise ValueError("potential must be bounded below")
    k = kernels.active()
    weights = np.empty(n_samples)
    for start, stop, paths in bridge_blocks(nu, lat, x1, x2, n_samples, stream, block_size):
        act = np.empty(stop - start)
        k.potential_action(paths, lat.eps, kind, coeffs, tx, tv, act)
        weights[start:stop] = np.exp(-act)
    mean, se = mean_and_stderr(weights)
    w0 = heat_kernel(x2, x1, T, nu)
    params = {"nu": nu, "T": T, "N": n_steps, "n_samples": n_samples, "seed": stream.seed,
              "stream_index": stream.stream_index, "blocks": -(-n_samples // block_size),
              "backend": kernels.backend_name()}
    return PropagatorEstimate(ComplexAmplitude(w0 * mean, INV_SQRT_LENGTH), w0 * se, "fk-mc", params)


# -- Cameron's diagnostic ----------------------------------------------------


@dataclass(frozen=True)
class CameronSpec:
    """Chain weight lambda, spacing eps and N interior integrations.

    ``sigma`` is the complex diffusion constant with 1/sigma = 1/nu - i m/hbar,
    stored for reporting only.
    """

    lam: complex
    eps: float
    N: int
    sigma: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if not self.lam.real > 0:
            raise ValueError("Re(lambda) must be positive")
        if not self.eps > 0 or self.N < 1:
            raise ValueError("need eps > 0 and N >= 1")

    @staticmethod
    def sigma_from(nu, m=1.0, hbar=1.0) -> complex:
        return 1.0 / (1.0 / nu - 1j * m / hbar)

    @property
    def duration(self) -> float:
        """Total lattice time (N + 1) eps."""
        return (self.N + 1) * self.eps


def cameron_step(lam, eps) -> GaussianKernel:
    c = -lam / (2 * eps)
    return GaussianKernel.from_coefficients(cmath.sqrt(lam / (2 * math.pi * eps)), c, -2 * c, c)


def cameron_chain_value(spec: CameronSpec, x2, x1) -> ComplexAmplitude:
    """The N-fold complex Gaussian chain by closed-form composition.

    Equals (lambda / 2 pi (N+1) eps)^{1/2} exp[-lambda (x2-x1)^2 / 2 (N+1) eps].
    """
    k = compose_power(cameron_step(spec.lam, spec.eps), spec.N + 1)
    return ComplexAmplitude(k(x2, x1), INV_SQRT_LENGTH, {"N": spec.N, "eps": spec.eps})


def cameron_closed_form(spec: CameronSpec, x2, x1) -> complex:
    t = spec.duration
    return cmath.sqrt(spec.lam / (2 * math.pi * t)) * cmath.exp(-spec.lam * (x2 - x1) ** 2 / (2 * t))


def cameron_variation_factor(lam, N) -> float:
    """(|lambda| / Re lambda)^{N/2}; diverges with N iff Im lambda != 0."""
    lam = complex(lam)
    if not lam.real > 0:
        raise ValueError("Re(lambda) must be positive")
    # squared moduli keep 2^{N/4} exact for lambda = 1 + i
    return ((lam.real**2 + lam.imag**2) / lam.real**2) ** (N / 4)


def cameron_is_divergent(lam) -> bool:
    return complex(lam).imag != 0


def cameron_absolute_value(spec: CameronSpec, x2, x1) -> float:
    """Integral of the modulus of the chain integrand, in closed form.

    (|lambda|/Re lambda)^{N/2} (|lambda| / 2 pi (N+1) eps)^{1/2}
    exp[-Re lambda (x2-x1)^2 / 2 (N+1) eps].
    """
    lam = spec.lam
    t = spec.duration
    mass = math.sqrt(abs(lam) / (2 * math.pi * t)) * math.exp(-lam.real * (x2 - x1) ** 2 / (2 * t))
    return cameron_variation_factor(lam, spec.N) * mass


def cameron_bruteforce(spec: CameronSpec, x2, x1, absolute=False, n_nodes=80) -> complex:
    """Direct tensor-product Gauss-Hermite quadrature of the chain (N <= 3).

    The real part of the exponent is a positive-definite quadratic form; the
    nodes are mapped through its Cholesky factor so the rule integrates the
    Gaussian envelope exactly and only the bounded phase is sampled.
    """
    N = spec.N
    if N > 3:
        raise ValueError("brute force is limited to N <= 3")
    lam, eps = spec.lam, spec.eps
    # exponent -(lam/2eps) sum (x_{l+1} - x_l)^2 = -(lam/2eps)(y^T A y - 2 b.y + c)
    A = 2 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
    b = np.zeros(N)
    b[0] += x1
    b[-1] += x2
    c = x1 * x1 + x2 * x2
    coef = (lam.real if absolute else lam) / (2 * eps)
    re = lam.real / (2 * eps)
    mean = np.linalg.solve(A, b)
    L = np.linalg.cholesky(np.linalg.inv(2 * re * A))
    t, w = np.polynomial.hermite_e.hermegauss(n_nodes)  # weight e^{-t^2/2}
    grids = np.meshgrid(*([t] * N), indexing="ij")
    z = np.stack([g.ravel() for g in grids])
    wz = np.prod(np.meshgrid(*([w] * N), indexing="ij"), axis=0).ravel()
    y = mean[:, None] + L @ z
    quad = np.einsum("in,ij,jn->n", y, A, y) - 2 * b @ y + c
    # integrand / Gaussian envelope, envelope = exp(-re * quad)
    ratio = np.exp(-(coef - re) * quad) * np.exp(-re * (c - b @ mean))
    integral = np.sum(wz * ratio) * abs(np.linalg.det(L))
    pref = (abs(lam) if absolute else lam) / (2 * math.pi * eps)
    return complex(cmath.sqrt(pref) ** (N + 1) * integral)
