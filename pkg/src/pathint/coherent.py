"""Coherent-state representation: overlaps, functional representatives,
the coherent-state lattice propagator and canonical covariance.

Conventions follow :mod:`pathint.oracles.fock`: ``|p,q> = U[p,q]|0>`` with
``(Q + iP)|0> = 0``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import CompositionDiverges, SupportTruncationWarning, UnsupportedSymbol
from .numerics.amplitude import DIMENSIONLESS, ComplexAmplitude
from .numerics.chainquad import chain_quadrature
from .numerics.gaussian import GaussianKernel, compose_power
from .numerics.lattice import TimeLattice
from .oracles.fock import (
    FockSpace,
    StateVector,
    antinormal_operator,
    antinormal_quantize,
    coherent_components,
    matrix_propagator,
    normal_operator,
    number_rotation_element,
    polar_rule,
)
from .oracles.symbols import HamiltonianSymbol


def cs_overlap_value(p2, q2, p1, q1, hbar=1.0):
    """<p2,q2|p1,q1>; broadcasts over array arguments."""
    p2, q2, p1, q1 = (np.asarray(x, float) for x in (p2, q2, p1, q1))
    expo = 0.5j * (p2 + p1) * (q2 - q1) / hbar - ((p2 - p1) ** 2 + (q2 - q1) ** 2) / (4 * hbar)
    out = np.exp(expo)
    return complex(out) if out.ndim == 0 else out


def cs_overlap(p2, q2, p1, q1, hbar=1.0) -> ComplexAmplitude:
    """exp{(i/2hbar)(p2+p1)(q2-q1) - [(p2-p1)^2 + (q2-q1)^2]/4hbar}."""
    return ComplexAmplitude(cs_overlap_value(p2, q2, p1, q1, hbar), DIMENSIONLESS)


# -- functional representatives ---------------------------------------------


@dataclass(frozen=True)
class CSFunctionSample:
    """Values psi(p, q) = <p,q|psi> on the tensor grid ``p_axis x q_axis``."""

    p_axis: np.ndarray
    q_axis: np.ndarray
    values: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        p = np.asarray(self.p_axis, float)
        q = np.asarray(self.q_axis, float)
        v = np.asarray(self.values, complex)
        if v.shape != (p.size, q.size):
            raise ValueError("values must have shape (len(p_axis), len(q_axis))")
        for ax in (p, q):
            d = np.diff(ax)
            if ax.size < 5 or np.any(d <= 0) or np.ptp(d) > 1e-9 * d.max():
                raise ValueError("axes must be uniform, increasing and have >= 5 points")
        object.__setattr__(self, "p_axis", p)
        object.__setattr__(self, "q_axis", q)
        object.__setattr__(self, "values", v)

    @property
    def steps(self):
        return self.p_axis[1] - self.p_axis[0], self.q_axis[1] - self.q_axis[0]

    def same_grid(self, other) -> bool:
        return (self.p_axis.shape == other.p_axis.shape and self.q_axis.shape == other.q_axis.shape
                and np.allclose(self.p_axis, other.p_axis) and np.allclose(self.q_axis, other.q_axis)
                and self.hbar == other.hbar)


def cs_representative(state: StateVector, space: FockSpace, p_axis, q_axis) -> CSFunctionSample:
    """Sample psi(p, q) = sum_n conj(<n|p,q>) psi_n on a grid."""
    P, Q = np.meshgrid(np.asarray(p_axis, float), np.asarray(q_axis, float), indexing="ij")
    c = coherent_components(P, Q, space.dim, space.hbar)
    return CSFunctionSample(p_axis, q_axis, c.conj() @ state.components, space.hbar)


def cs_inner_product(f: CSFunctionSample, g: CSFunctionSample, edge_tol=1e-6) -> ComplexAmplitude:
    """int conj(f) g dp dq / (2 pi hbar) by the 2-D trapezoid rule."""
    if not f.same_grid(g):
        raise ValueError("representatives must share a grid")
    prod = f.values.conj() * g.values
    scale = max(np.abs(f.values).max(), 1e-300) * max(np.abs(g.values).max(), 1e-300)
    edge = max(np.abs(prod[[0, -1], :]).max(), np.abs(prod[:, [0, -1]]).max())
    if edge > edge_tol * scale:
        warnings.warn(f"integrand at the grid edge is {edge / scale:.2e} of its scale",
                      SupportTruncationWarning, stacklevel=2)
    wp = np.full(f.p_axis.size, f.steps[0])
    wq = np.full(f.q_axis.size, f.steps[1])
    wp[[0, -1]] *= 0.5
    wq[[0, -1]] *= 0.5
    val = wp @ prod @ wq / (2 * math.pi * f.hbar)
    return ComplexAmplitude(val, DIMENSIONLESS)


def _d4(f, h, axis):
    """Fourth-order central difference on interior points (2 dropped at each end)."""
    n = f.shape[axis]

    def sl(a, b):
        idx = [slice(None)] * f.ndim
        idx[axis] = slice(a, n + b if n + b != n else None)
        return f[tuple(idx)]

    return (-sl(4, 0) + 8 * sl(3, -1) - 8 * sl(1, -3) + sl(0, -4)) / (12 * h)


def heisenberg_rep_check(state: StateVector, space: FockSpace, p_axis, q_axis) -> float:
    """Max deviation of (-i hbar d_q) psi and (q + i hbar d_p) psi from <p,q|P|psi>, <p,q|Q|psi>."""
    hb = space.hbar
    psi = cs_representative(state, space, p_axis, q_axis)
    hp, hq = psi.steps
    Ppsi = cs_representative(StateVector(space.P @ state.components), space, p_axis, q_axis).values
    Qpsi = cs_representative(StateVector(space.Q @ state.components), space, p_axis, q_axis).values
    inner = (slice(2, -2), slice(2, -2))
    lhs_p = -1j * hb * _d4(psi.values, hq, axis=1)[2:-2, :]
    lhs_q = psi.q_axis[None, 2:-2] * psi.values[inner] + 1j * hb * _d4(psi.values, hp, axis=0)[:, 2:-2]
    return float(max(np.abs(lhs_p - Ppsi[inner]).max(), np.abs(lhs_q - Qpsi[inner]).max()))


def mean_values(p, q, space: FockSpace):
    """(<p,q|P|p,q>, <p,q|Q|p,q>) from the number-basis engine."""
    c = coherent_components(p, q, space.dim, space.hbar)
    return (np.vdot(c, space.P @ c).real, np.vdot(c, space.Q @ c).real)


# -- coherent-state lattice --------------------------------------------------


def _sym(u, v):
    return 0.5 * (np.outer(u, v) + np.outer(v, u))


_DP = np.array([1.0, 0.0, -1.0, 0.0])
_DQ = np.array([0.0, 1.0, 0.0, -1.0])
_PB = np.array([0.5, 0.0, 0.5, 0.0])
_QB = np.array([0.0, 0.5, 0.0, 0.5])


def cs_link_kernel(H: HamiltonianSymbol, eps, hbar=1.0) -> GaussianKernel:
    """One link of the coherent-state lattice for a quadratic symbol.

    Variables ``z = (p_{l+1}, q_{l+1}, p_l, q_l)``. H is evaluated at the
    complex arguments P = pbar + i dq/2, Q = qbar - i dp/2.
    """
    hpp, hpq, hqq, hp, hq, h0 = H.quadratic_parts()
    P = _PB + 0.5j * _DQ
    Q = _QB - 0.5j * _DP
    k = 1j / hbar
    M = -(np.outer(_DP, _DP) + np.outer(_DQ, _DQ)) / (4 * hbar) + k * _sym(_PB, _DQ)
    M = M - k * eps * (hpp * np.outer(P, P) + hpq * _sym(P, Q) + hqq * np.outer(Q, Q))
    L = -k * eps * (hp * P + hq * Q)
    return GaussianKernel.from_quadratic(M, L, constant=-k * eps * h0)


def _cs_link_extra(H, eps, hbar):
    def extra(z1, z0):
        p1, q1 = z1[:, 0], z1[:, 1]
        p0, q0 = z0[:, 0], z0[:, 1]
        P = 0.5 * (p1 + p0) + 0.5j * (q1 - q0)
        Q = 0.5 * (q1 + q0) - 0.5j * (p1 - p0)
        return 1j / hbar * (0.5 * (p1 + p0) * (q1 - q0) - eps * H(P, Q))

    return extra


def _growth_probe(H, eps, hbar, pins, N, scales=(10.0, 30.0, 100.0, 300.0), margin=50.0):
    """True when the modulus of the lattice integrand grows without bound.

    With complex arguments, Im H(P, Q) of a polynomial of degree > 2 can
    outrun the Gaussian link factor. The log-modulus is probed along the
    coordinate axes and their pairwise diagonals of the interior variables.
    """
    p2, q2, p1, q1 = pins
    n_var = 2 * N
    dirs = [np.eye(n_var)[k] * s for k in range(n_var) for s in (1, -1)]
    dirs += [(np.eye(n_var)[j] + s * np.eye(n_var)[k]) / math.sqrt(2)
             for j in range(n_var) for k in range(j + 1, n_var) for s in (1, -1)]
    base = np.linspace(0, 1, N + 2)[1:-1]
    centre = np.column_stack([p1 + (p2 - p1) * base, q1 + (q2 - q1) * base]).ravel()
    extra = _cs_link_extra(H, eps, hbar)

    def logmod(y):
        z = np.vstack([[p1, q1], y.reshape(N, 2), [p2, q2]])
        d = np.diff(z, axis=0)
        e = extra(z[1:], z[:-1])
        return float(np.sum(e.real) - np.sum(d * d) / (4 * hbar))

    ref = logmod(centre)
    return any(logmod(centre + t * d) > ref + margin for d in dirs for t in scales)


def cs_lattice_propagator(H: HamiltonianSymbol, lat: TimeLattice, pins, hbar=1.0,
                          method="auto") -> ComplexAmplitude:
    """The coherent-state lattice with N interior (p, q) integrations.

    ``pins = (p2, q2, p1, q1)``. Quadratic symbols use the closed-form
    Gaussian chain for any N (``method="quadrature"`` forces the direct rule,
    N <= 3, as a cross-check). Other polynomial symbols are integrated
    directly for N <= 3 once a growth probe shows the integrand is bounded;
    otherwise :class:`CompositionDiverges` is raised.
    """
    p2, q2, p1, q1 = (float(x) for x in pins)
    eps = lat.eps
    meta = {"N": lat.N, "eps": eps, "p_integrations": lat.N, "q_integrations": lat.N}
    quadratic = H.is_polynomial and "quadratic" in H.tags
    if quadratic and method != "quadrature":
        if lat.N == 0:
            k = cs_link_kernel(H, eps, hbar)
        else:
            k = compose_power(cs_link_kernel(H, eps, hbar), lat.n_links, measure=1 / (2 * math.pi * hbar))
        val = k(np.array([p2, q2]), np.array([p1, q1]))
        return ComplexAmplitude(val, DIMENSIONLESS, {**meta, "method": "gaussian-chain"})
    if not H.is_polynomial or lat.N > 3:
        raise UnsupportedSymbol("non-quadratic symbols are supported for polynomial H with N <= 3 only")
    extra = _cs_link_extra(H, eps, hbar)
    if lat.N == 0:
        z1 = np.array([[p2, q2]])
        z0 = np.array([[p1, q1]])
        val = cmath.exp(complex(extra(z1, z0)[0]) - ((p2 - p1) ** 2 + (q2 - q1) ** 2) / (4 * hbar))
        return ComplexAmplitude(val, DIMENSIONLESS, {**meta, "method": "direct"})
    if not quadratic and _growth_probe(H, eps, hbar, (p2, q2, p1, q1), lat.N):
        raise CompositionDiverges(
            "lattice integrand grows without bound: Im H at the complex arguments beats the Gaussian link"
        )
    val = chain_quadrature(1 / (4 * hbar), [p2, q2], [p1, q1], lat.N, extra)
    val /= (2 * math.pi * hbar) ** lat.N
    return ComplexAmplitude(val, DIMENSIONLESS, {**meta, "method": "quadrature"})


def _isotropic_harmonic(H: HamiltonianSymbol):
    """(omega, h0) if H = omega (p^2 + q^2)/2 + h0, else None."""
    if not H.is_polynomial or not set(H.coeffs) <= {(2, 0), (0, 2), (0, 0)}:
        return None
    a, b = H.coeffs.get((2, 0), 0.0), H.coeffs.get((0, 2), 0.0)
    if a != b:
        return None
    return 2 * a, H.coeffs.get((0, 0), 0.0)


def fock_propagator_element(H: HamiltonianSymbol, T, pins, hbar=1.0, ordering="antinormal",
                            dim=80) -> complex:
    """<p2,q2| exp(-iT H_op / hbar) |p1,q1> with H_op the ordered quantization of H.

    Isotropic oscillators use the closed-form rotation; anything else goes
    through the number-basis engine.
    """
    p2, q2, p1, q1 = pins
    iso = _isotropic_harmonic(H)
    if iso is not None:
        omega, h0 = iso
        # antinormal gives omega hbar (N + 1), normal gives omega hbar N
        shift = 1.0 if ordering == "antinormal" else 0.0
        return cmath.exp(-1j * T * h0 / hbar) * number_rotation_element(p2, q2, p1, q1, omega * T, shift, hbar)
    space = FockSpace(dim, hbar)
    op = antinormal_operator(H, space) if ordering == "antinormal" else normal_operator(H, space)
    U = matrix_propagator(op, T, hbar)
    c2 = coherent_components(p2, q2, dim, hbar)
    c1 = coherent_components(p1, q1, dim, hbar)
    return complex(np.vdot(c2, U.matrix @ c1))


def cs_combination_check(kernel_fn, T1, T2, pins, radius=8.0, n_r=96, n_theta=128, hbar=1.0) -> float:
    """|K(3;1) - int K(3;2) K(2;1) dp dq / 2 pi hbar| over a disk quadrature.

    ``kernel_fn(p2, q2, p1, q1, T)`` must broadcast over array arguments;
    ``pins = (p3, q3, p1, q1)``. ``T2 = 0`` tests the reproducing property.
    """
    p3, q3, p1, q1 = pins
    p, q, w = polar_rule(radius, n_r, n_theta)
    mid = kernel_fn(p3, q3, p, q, T2) * kernel_fn(p, q, p1, q1, T1)
    composed = np.sum(w * mid) / (2 * math.pi * hbar)
    return float(abs(composed - kernel_fn(p3, q3, p1, q1, T1 + T2)))


def rotation_kernel_fn(omega=1.0, shift=1.0, hbar=1.0):
    """Vectorised <p2,q2| exp(-i omega T (N + shift)) |p1,q1>."""

    def k(p2, q2, p1, q1, T):
        a1 = (np.asarray(q1) + 1j * np.asarray(p1)) / math.sqrt(2 * hbar)
        a2 = (np.asarray(q2) + 1j * np.asarray(p2)) / math.sqrt(2 * hbar)
        th = omega * T
        expo = (np.conj(a2) * a1 * np.exp(-1j * th) - 0.5 * np.abs(a1) ** 2 - 0.5 * np.abs(a2) ** 2
                + 0.5j * (np.asarray(p2) * q2 - np.asarray(p1) * q1) / hbar - 1j * th * shift)
        return np.exp(expo)

    return k


# -- canonical covariance ----------------------------------------------------


@dataclass(frozen=True)
class CanonicalTransform:
    """Point-gauge family qbar = q, pbar = p + kappa q, generator Gbar = -kappa qbar^2 / 2."""

    kappa: float
    kind: str = "point-gauge"

    def forward(self, p, q):
        return p + self.kappa * q, q

    def inverse(self, pb, qb):
        return pb - self.kappa * qb, qb

    def generator(self, pb, qb):
        return -0.5 * self.kappa * np.asarray(qb) ** 2

    def jacobian(self, pb=None, qb=None) -> np.ndarray:
        """d(p, q) / d(pbar, qbar)."""
        return np.array([[1.0, -self.kappa], [0.0, 1.0]])

    def one_form_residual(self, p, q) -> float:
        """max |pbar dqbar + dGbar - p dq| on the sample points (components dp, dq)."""
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        pb, qb = self.forward(p, q)
        # dqbar = dq; dGbar = -kappa q dq
        coef_dp = np.zeros_like(p)
        coef_dq = pb * 1.0 - self.kappa * qb - p
        return float(max(np.abs(coef_dp).max(), np.abs(coef_dq).max()))


def _phase_adjusted(tr: CanonicalTransform, pb, qb, dim, hbar):
    p, q = tr.inverse(pb, qb)
    return cmath.exp(-1j * float(tr.generator(pb, qb)) / hbar) * coherent_components(p, q, dim, hbar)


def canonical_phase_check(tr: CanonicalTransform, H: HamiltonianSymbol, T, pins_bar, hbar=1.0,
                          dim=80) -> float:
    """Compare two routes to Kbar at transformed labels.

    (i) number-basis matrix element between e^{-i Gbar/hbar}|p,q> vectors;
    (ii) e^{i(Gbar'' - Gbar')/hbar} times K at the original labels, from
    :func:`fock_propagator_element` (closed form for isotropic oscillators).
    """
    pb2, qb2, pb1, qb1 = pins_bar
    space = FockSpace(dim, hbar)
    U = matrix_propagator(antinormal_operator(H, space), T, hbar)
    v2 = _phase_adjusted(tr, pb2, qb2, dim, hbar)
    v1 = _phase_adjusted(tr, pb1, qb1, dim, hbar)
    route1 = complex(np.vdot(v2, U.matrix @ v1))
    p2, q2 = tr.inverse(pb2, qb2)
    p1, q1 = tr.inverse(pb1, qb1)
    phase = cmath.exp(1j * float(tr.generator(pb2, qb2) - tr.generator(pb1, qb1)) / hbar)
    route2 = phase * fock_propagator_element(H, T, (p2, q2, p1, q1), hbar, "antinormal", dim)
    return abs(route1 - route2)


def transformed_quantization(tr: CanonicalTransform, H: HamiltonianSymbol, space: FockSpace,
                             radius=None, n_r=160, n_theta=None) -> np.ndarray:
    """int Hbar(pbar, qbar) |pbar,qbar><pbar,qbar| dpbar dqbar / 2 pi hbar.

    The quadrature runs over a disk in the barred coordinates; its image in
    (p, q) is a sheared ellipse, so the radius is stretched by the largest
    singular value of the Jacobian.
    """
    J = tr.jacobian()
    stretch = float(np.linalg.svd(J, compute_uv=False).max())
    radius = radius if radius is not None else 12.0 * math.sqrt(space.hbar) * stretch
    n_theta = n_theta or 4 * (space.dim + 17)
    pb, qb, w = polar_rule(radius, n_r, n_theta)
    p, q = tr.inverse(pb, qb)
    vals = np.asarray(H(p, q), complex) * w / (2 * math.pi * space.hbar)
    c = coherent_components(p, q, space.dim, space.hbar)
    c = c * np.exp(-1j * tr.generator(pb, qb) / space.hbar)[:, None]
    return (c * vals[:, None]).T @ c.conj()


def quantization_invariance_residual(tr: CanonicalTransform, H: HamiltonianSymbol, space: FockSpace,
                                     block=None, **kw) -> float:
    """Trusted-block difference between transformed and original quantizations."""
    block = block or space.trusted
    new = transformed_quantization(tr, H, space, **kw)
    old = antinormal_quantize(H, space).matrix
    return float(np.abs(new[:block, :block] - old[:block, :block]).max())


def metric_pullback(tr: CanonicalTransform, point) -> tuple:
    """(A, B, C) with dp^2 + dq^2 = A dpbar^2 + 2B dpbar dqbar + C dqbar^2."""
    J = tr.jacobian(*point)
    if abs(np.linalg.det(J)) < 1e-14:
        raise ValueError("singular Jacobian")
    g = J.T @ J
    return float(g[0, 0]), float(g[0, 1]), float(g[1, 1])


__all__: Any = [
    "CSFunctionSample", "CanonicalTransform", "canonical_phase_check", "cs_combination_check",
    "cs_inner_product", "cs_lattice_propagator", "cs_link_kernel", "cs_overlap", "cs_overlap_value",
    "cs_representative", "fock_propagator_element", "heisenberg_rep_check", "mean_values",
    "metric_pullback", "quantization_invariance_residual", "rotation_kernel_fn",
    "transformed_quantization",
]
