"""Real-time lattice path integrals.

Configuration-space lattice with left-point potential and the optional
Gaussian convergence factor, phase-space lattices pinned in q or in p, the
relativistic free particle, and composition-law residuals.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import DistributionalKernel, GridTruncationWarning, UnsupportedSymbol
from .numerics.amplitude import INV_LENGTH, INV_SQRT_LENGTH, ComplexAmplitude
from .numerics.gaussian import GaussianKernel, compose_gaussian, compose_power
from .numerics.lattice import TimeLattice
from .oracles.closed_form import free_kernel, relativistic_contour, relativistic_semigroup_kernel
from .oracles.symbols import HamiltonianSymbol

POTENTIAL_KINDS = ("zero", "linear", "quadratic", "tabulated")


@dataclass(frozen=True)
class PotentialSpec:
    """V(x) = c0 + c1 x + c2 x^2, or linear interpolation of a table.

    Tabulated potentials are held constant beyond the table ends.
    ``lower_bound`` is the declared constant c with V >= c; it is checked
    analytically for polynomials and on the table for tabulated kinds.
    """

    kind: str = "zero"
    coeffs: tuple = ()
    table: Any = None
    lower_bound: float = -math.inf

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValueError(f"kind must be one of {POTENTIAL_KINDS}")
        c = tuple(float(x) for x in self.coeffs)
        limit = {"zero": 0, "linear": 2, "quadratic": 3, "tabulated": 0}[self.kind]
        if len(c) > limit:
            raise ValueError(f"too many coefficients for a {self.kind} potential")
        object.__setattr__(self, "coeffs", c + (0.0,) * (limit - len(c)))
        if self.kind == "tabulated":
            if self.table is None:
                raise ValueError("tabulated potential needs a table")
            x, v = (np.asarray(a, float) for a in self.table)
            if x.ndim != 1 or x.shape != v.shape or np.any(np.diff(x) <= 0):
                raise ValueError("table must be two equal-length arrays with increasing x")
            object.__setattr__(self, "table", (x, v))
        if math.isfinite(self.lower_bound) and self.minimum() < self.lower_bound:
            raise ValueError(f"declared lower bound {self.lower_bound} violated (min {self.minimum()})")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def quadratic(cls, c2, c1=0.0, c0=0.0, lower_bound=-math.inf):
        return cls("quadratic", (c0, c1, c2), lower_bound=lower_bound)

    @classmethod
    def linear(cls, c1, c0=0.0):
        return cls("linear", (c0, c1))

    @classmethod
    def constant(cls, c):
        return cls("linear", (c, 0.0), lower_bound=c)

    @classmethod
    def tabulated(cls, x, v, lower_bound=-math.inf):
        return cls("tabulated", table=(x, v), lower_bound=lower_bound)

    @property
    def poly(self) -> np.ndarray:
        """Ascending coefficients (empty for tabulated)."""
        return np.asarray(self.coeffs, float) if self.kind != "tabulated" else np.zeros(0)

    @property
    def is_polynomial(self) -> bool:
        return self.kind != "tabulated"

    def minimum(self) -> float:
        if self.kind == "tabulated":
            return float(self.table[1].min())
        c0, c1, c2 = (self.coeffs + (0.0, 0.0, 0.0))[:3]
        if c2 > 0:
            return c0 - c1 * c1 / (4 * c2)
        if c2 == 0 and c1 == 0:
            return c0
        return -math.inf

    def __call__(self, x):
        x = np.asarray(x, float)
        if self.kind == "tabulated":
            out = np.interp(x, *self.table)
        else:
            out = np.polynomial.polynomial.polyval(x, self.poly) if self.coeffs else np.zeros_like(x)
        return float(out) if out.ndim == 0 else out

    def kernel_args(self):
        """``(kind_code, coeffs, tab_x, tab_v)`` for the compiled kernels."""
        if self.kind == "tabulated":
            return 1, np.zeros(1), self.table[0], self.table[1]
        c = self.poly if self.poly.size else np.zeros(1)
        return 0, np.ascontiguousarray(c), np.zeros(1), np.zeros(1)


@dataclass(frozen=True)
class WavefunctionGrid:
    """Complex values on a uniform grid ``x_min .. x_max`` (``n_points`` nodes)."""

    x_min: float
    x_max: float
    n_points: int
    values: Any = None

    def __post_init__(self):
        if not self.x_max > self.x_min or self.n_points < 2:
            raise ValueError("grid needs x_max > x_min and at least two points")
        vals = np.zeros(self.n_points, complex) if self.values is None else np.array(self.values, complex)
        if vals.shape != (self.n_points,):
            raise ValueError("values must have one entry per grid node")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights."""
        w = np.full(self.n_points, self.dx)
        w[[0, -1]] *= 0.5
        return w

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))

    def with_values(self, values) -> "WavefunctionGrid":
        return WavefunctionGrid(self.x_min, self.x_max, self.n_points, values)


@dataclass(frozen=True)
class KernelMatrix:
    """``matrix[i, j] = K(x_i, x_j)`` on a grid, with provenance."""

    matrix: np.ndarray
    grid: WavefunctionGrid
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (self.grid.n_points, self.grid.n_points):
            raise ValueError("matrix shape does not match the grid")
        if not np.all(np.isfinite(m)):
            raise ValueError("kernel entries must be finite")

    def at(self, x2, x1):
        """Nearest-node lookup."""
        x = self.grid.x
        return self.matrix[np.abs(x - x2).argmin(), np.abs(x - x1).argmin()]

    def apply(self, psi: WavefunctionGrid) -> WavefunctionGrid:
        if psi.n_points != self.grid.n_points:
            raise ValueError("shape mismatch between kernel and wavefunction")
        return psi.with_values(self.matrix @ (self.grid.weights * psi.values))


# -- configuration-space lattice ---------------------------------------------


def _require_quadratic(V: PotentialSpec):
    if not V.is_polynomial:
        raise UnsupportedSymbol("closed-form chains need a potential of degree <= 2")
    return (V.coeffs + (0.0, 0.0, 0.0))[:3]


def _link_kernel(V, eps, m, hbar, damping_out=0.0):
    """One configuration-space link x_l -> x_{l+1}: kinetic term, V(x_l), and damping on x_{l+1}."""
    c0, c1, c2 = _require_quadratic(V)
    k = 1j * m / (2 * hbar * eps)
    a = k - damping_out * eps * eps / (2 * hbar)
    c = k - 1j * eps * c2 / hbar
    e = -1j * eps * c1 / hbar
    pref = cmath.sqrt(m / (2j * math.pi * hbar * eps)) * cmath.exp(-1j * eps * c0 / hbar)
    return GaussianKernel.from_coefficients(pref, a, -2 * k, c, 0.0, e)


def lattice_chain_kernel(V: PotentialSpec, lat: TimeLattice, m=1.0, hbar=1.0, damping=0.0) -> GaussianKernel:
    """The N-fold lattice integral as a closed-form Gaussian kernel.

    The potential sits at the left point of each link (``l = 0..N``);
    ``damping`` scales the convergence factor -(eps^2/2 hbar) sum x_l^2 on the
    interior nodes (1 gives the full factor, 0 switches it off).
    """
    eps = lat.eps
    last = _link_kernel(V, eps, m, hbar, 0.0)
    if lat.N == 0:
        return last
    inner = compose_power(_link_kernel(V, eps, m, hbar, damping), lat.N)
    return compose_gaussian(last, inner)


def lattice_chain_quadratic(V: PotentialSpec, lat: TimeLattice, x2, x1, m=1.0, hbar=1.0,
                            damping=0.0) -> ComplexAmplitude:
    """Configuration-space lattice propagator for V of degree <= 2, evaluated exactly."""
    k = lattice_chain_kernel(V, lat, m, hbar, damping)
    meta = {"scheme": "lattice", "N": lat.N, "eps": lat.eps, "damping": damping,
            "x_integrations": lat.N, "placement": "left"}
    return ComplexAmplitude(k(x2, x1), INV_SQRT_LENGTH, meta)


def _boundary_check(mat, core_frac=0.5, rel=1e-6):
    """Warn when amplitude leaving the grid core reaches the boundary nodes."""
    n = mat.shape[0]
    lo = int(n * (1 - core_frac) / 2)
    core = slice(lo, n - lo)
    peak = np.abs(mat[core, core]).max()
    edge = max(np.abs(mat[core, [0, -1]]).max(), np.abs(mat[[0, -1], core]).max())
    if peak > 0 and edge > rel * peak:
        warnings.warn(
            f"kernel amplitude at grid boundary is {edge / peak:.2e} of the core maximum",
            GridTruncationWarning, stacklevel=3,
        )
    return edge / peak if peak > 0 else 0.0


def lattice_grid_general(V: PotentialSpec, lat: TimeLattice, grid: WavefunctionGrid, m=1.0, hbar=1.0,
                         damping=0.0, check=True) -> KernelMatrix:
    """Configuration-space lattice by trapezoidal grid quadrature of the N interior integrals.

    Builds L (W D L)^N with L the sampled link kernel (left-point V), W the
    trapezoid weights and D the damping factor on interior nodes. Only for
    small N and compact grids: real-time grid quadrature is oscillatory.
    """
    if damping < 0:
        raise ValueError("damping must be >= 0")
    v = V(grid.x)
    eps = lat.eps
    x = grid.x
    dx2 = (x[:, None] - x[None, :]) ** 2
    link = cmath.sqrt(m / (2j * math.pi * hbar * eps)) * np.exp(
        1j * m * dx2 / (2 * hbar * eps) - 1j * eps * v[None, :] / hbar
    )
    mid = grid.weights * np.exp(-damping * eps * eps * x * x / (2 * hbar))
    out = link
    for _ in range(lat.N):
        out = link @ (mid[:, None] * out)
    meta = {"scheme": "lattice-grid", "N": lat.N, "eps": eps, "damping": damping,
            "x_integrations": lat.N}
    if check:
        meta["boundary_ratio"] = _boundary_check(out)
    return KernelMatrix(out, grid, meta)


def free_wavepacket(grid: WavefunctionGrid, x0=0.0, width=1.0, k0=0.0) -> WavefunctionGrid:
    x = grid.x
    vals = (2 * np.pi * width**2) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * width**2) + 1j * k0 * x)
    return grid.with_values(vals)


# -- phase-space lattices -----------------------------------------------------


def _fresnel_p_integral(a, b, delta, eps, hbar):
    """int dp/(2 pi hbar) exp{(i/hbar)[p delta - eps (a p^2 + b p)]} as 1-D kernel pieces.

    Returns ``(prefactor, k)`` with the result prefactor * exp(i k (delta - eps b)^2).
    """
    if a == 0:
        raise UnsupportedSymbol("momentum integral without a p^2 term is a delta function")
    pref = cmath.sqrt(1.0 / (4j * math.pi * hbar * eps * a))
    return pref, 1.0 / (4 * hbar * eps * a)


def _separable_parts(H: HamiltonianSymbol):
    if not (H.is_polynomial and "separable" in H.tags):
        raise UnsupportedSymbol("expected a separable polynomial symbol")
    g = H.coeffs.get
    if any(i > 2 for (i, j) in H.coeffs):
        raise UnsupportedSymbol("kinetic part must be at most quadratic in p")
    vq = [g((0, j), 0.0) for j in range(0, 1 + max((j for (i, j) in H.coeffs), default=0))]
    return g((2, 0), 0.0), g((1, 0), 0.0), vq


def ps_lattice_q_kernel(H: HamiltonianSymbol, lat: TimeLattice, hbar=1.0) -> GaussianKernel:
    """Phase-space lattice for separable quadratic H as a Gaussian kernel in (q'', q').

    Each p_{l+1/2} integral is Fresnel; the potential is evaluated at the link
    midpoint (q_{l+1} + q_l)/2.
    """
    a, b, vq = _separable_parts(H)
    if len(vq) > 3:
        raise UnsupportedSymbol("closed-form q-space chain needs V of degree <= 2")
    v0, v1, v2 = (vq + [0.0, 0.0, 0.0])[:3]
    eps = lat.eps
    pref, k = _fresnel_p_integral(a, b, None, eps, hbar)
    # exponent i k (dq - eps b)^2 - (i eps/hbar) V((q'' + q')/2), dq = q'' - q'
    ik = 1j * k
    iv = -1j * eps / hbar
    quad = np.array([[ik + iv * v2 / 4, -ik + iv * v2 / 4], [-ik + iv * v2 / 4, ik + iv * v2 / 4]])
    lin = np.array([-2 * ik * eps * b + iv * v1 / 2, 2 * ik * eps * b + iv * v1 / 2])
    const = ik * (eps * b) ** 2 + iv * v0
    step = GaussianKernel.from_quadratic(quad, lin, const, pref)
    return compose_power(step, lat.n_links)


def ps_lattice_q(H: HamiltonianSymbol, lat: TimeLattice, q2, q1, hbar=1.0) -> ComplexAmplitude:
    """q-pinned phase-space lattice propagator K(q'', q').

    Momentum-only H: every q_l integral is a momentum-conserving delta, so all
    p_{l+1/2} coincide and the lattice collapses to one p integral, exactly and
    for any N. Separable H = a p^2 + b p + V(q) with V of degree <= 2: Fresnel
    p-integrals and a closed-form chain with midpoint V.
    """
    meta = {"scheme": "ps-lattice-q", "N": lat.N, "eps": lat.eps,
            "p_integrations": lat.N + 1, "q_integrations": lat.N}
    T = lat.T
    dq = q2 - q1
    if "momentum-only" in H.tags:
        if H.is_polynomial:
            a, b, vq = _separable_parts(H)
            v0 = vq[0] if vq else 0.0
            pref, k = _fresnel_p_integral(a, b, None, T, hbar)
            val = pref * cmath.exp(1j * k * (dq - T * b) ** 2 - 1j * T * v0 / hbar)
            meta["method"] = "fresnel"
        elif H.name == "relativistic":
            val = relativistic_contour(dq, T, H.meta["m"], hbar)
            meta["method"] = "contour"
        else:
            raise UnsupportedSymbol("momentum-only symbol without a known evaluation route")
        meta["collapsed"] = True
        return ComplexAmplitude(val, INV_LENGTH, meta)
    k = ps_lattice_q_kernel(H, lat, hbar)
    meta["method"] = "gaussian-chain"
    return ComplexAmplitude(k(q2, q1), INV_LENGTH, meta)


def ps_lattice_p_kernel(H: HamiltonianSymbol, lat: TimeLattice, hbar=1.0):
    """p-pinned phase-space lattice as a broadcasting callable ``k(p'', p')`` plus metadata.

    Mirror of :func:`ps_lattice_q_kernel`: q_{l+1/2} integrals are done first.
    When H has no q^2 term they are deltas and the kernel is distributional; a
    :class:`DistributionalKernel` carrying the shift and weight is raised.
    """
    if not (H.is_polynomial and "separable" in H.tags):
        raise UnsupportedSymbol("p-space lattice supports separable polynomial symbols")
    g = H.coeffs.get
    if any(j > 2 for (i, j) in H.coeffs) or any(i > 2 for (i, j) in H.coeffs):
        raise UnsupportedSymbol("closed-form p-space chain needs degree <= 2 in each variable")
    kq, c1, c0 = g((0, 2), 0.0), g((0, 1), 0.0), g((0, 0), 0.0)
    ap, bp = g((2, 0), 0.0), g((1, 0), 0.0)
    meta = {"scheme": "ps-lattice-p", "N": lat.N, "eps": lat.eps,
            "q_integrations": lat.N + 1, "p_integrations": lat.N}
    eps, T = lat.eps, lat.T

    def kinetic(p):
        return ap * p * p + bp * p

    if kq == 0:
        # delta(p_{l+1} - p_l + eps c1) on every link
        shift = -c1 * T

        def weight(p_in, n=lat.n_links):
            path = p_in - c1 * eps * np.arange(n + 1)
            mid = 0.5 * (path[1:] + path[:-1])
            return np.exp(-1j * eps * (kinetic(mid).sum() + n * c0) / hbar)

        raise DistributionalKernel(
            "p-space kernel is delta-concentrated on p'' - p' = %g" % shift, shift=shift, weight=weight
        )
    if "position-only" in H.tags:
        # all q_{l+1/2} coincide: one q integral
        pref, k = _fresnel_p_integral(kq, c1, None, T, hbar)
        meta.update(method="fresnel", collapsed=True)

        def collapsed(p2, p1):
            dp = np.asarray(p2) - np.asarray(p1)
            return pref * np.exp(1j * k * (-dp - T * c1) ** 2 - 1j * T * c0 / hbar)

        return collapsed, meta
    pref, k = _fresnel_p_integral(kq, c1, None, eps, hbar)
    ik = 1j * k
    iv = -1j * eps / hbar
    # exponent i k (-(p'' - p') - eps c1)^2 - (i eps/hbar) kinetic((p'' + p')/2)
    quad = np.array([[ik + iv * ap / 4, -ik + iv * ap / 4], [-ik + iv * ap / 4, ik + iv * ap / 4]])
    lin = np.array([2 * ik * eps * c1 + iv * bp / 2, -2 * ik * eps * c1 + iv * bp / 2])
    const = ik * (eps * c1) ** 2 + iv * c0
    step = GaussianKernel.from_quadratic(quad, lin, const, pref)
    meta["method"] = "gaussian-chain"
    return compose_power(step, lat.n_links), meta


def ps_lattice_p(H: HamiltonianSymbol, lat: TimeLattice, p2, p1, hbar=1.0) -> ComplexAmplitude:
    """p-pinned phase-space lattice propagator K(p'', p'); see :func:`ps_lattice_p_kernel`."""
    kern, meta = ps_lattice_p_kernel(H, lat, hbar)
    return ComplexAmplitude(complex(kern(p2, p1)), INV_LENGTH, meta)


def smeared_p_element(H, lat, f, g, p_grid, hbar=1.0) -> complex:
    """int int conj(f(p'')) K(p'', p') g(p') dp'' dp' on a uniform grid.

    Works for both regular and delta-concentrated p-space kernels.
    """
    p = np.asarray(p_grid, float)
    w = np.full(p.size, p[1] - p[0])
    w[[0, -1]] *= 0.5
    try:
        kern, _ = ps_lattice_p_kernel(H, lat, hbar)
    except DistributionalKernel as dk:
        vals = np.array([np.conj(f(b + dk.shift)) * dk.weight(b) * g(b) for b in p])
        return complex(np.sum(w * vals))
    k = kern(p[:, None], p[None, :])
    return complex(np.conj(f(p)) * w @ k @ (w * g(p)))


def p_space_fourier_check(H, lat, hbar=1.0, width=0.7, centers=(0.3, -0.2), n=801, span=12.0):
    """Compare a smeared p-space kernel with the Fourier transform of the q-space one.

    Gaussian test functions f, g in momentum space are mapped to position
    space analytically; the q-space kernel is applied on a grid. Returns the
    absolute difference of the two smeared matrix elements.
    """
    pf, pg = centers

    def f(p):
        return np.exp(-((np.asarray(p) - pf) ** 2) / (2 * width**2))

    def g(p):
        return np.exp(-((np.asarray(p) - pg) ** 2) / (2 * width**2))

    def to_q(center, q):
        # int f(p) e^{ipq/hbar} dp / sqrt(2 pi hbar) for the Gaussian above
        s2 = width**2
        return (math.sqrt(2 * math.pi * s2) / math.sqrt(2 * math.pi * hbar)
                * np.exp(1j * center * q / hbar - s2 * q * q / (2 * hbar * hbar)))

    p = np.linspace(-span, span, n)
    direct = smeared_p_element(H, lat, f, g, p, hbar)
    # q-space route
    kern = ps_lattice_q_kernel(H, lat, hbar) if "momentum-only" not in H.tags or H.is_polynomial else None
    if kern is None:
        raise UnsupportedSymbol("Fourier check implemented for polynomial symbols")
    q = np.linspace(-span * hbar / width, span * hbar / width, 2 * n + 1)
    wq = np.full(q.size, q[1] - q[0])
    kq = kern(q[:, None], q[None, :])
    fq = to_q(pf, q)
    gq = to_q(pg, q)
    via_q = complex(np.conj(fq) * wq @ kq @ (wq * gq))
    return abs(direct - via_q), direct, via_q


# -- composition law ----------------------------------------------------------


def composition_check(kernel_fn, t1, t_mid, t2, pins, quadrature="gaussian") -> float:
    """max |K(3,1) - int K(3,2) K(2,1) d(mid)| over ``pins``.

    ``kernel_fn(t_out, t_in)`` returns either a :class:`GaussianKernel`
    (``quadrature="gaussian"``: the middle integral is done in closed form)
    or a callable ``k(x_out, x_in)`` that broadcasts; in that case
    ``quadrature`` is ``(nodes, weights)`` for the middle variable.
    """
    k31 = kernel_fn(t2, t1)
    k32 = kernel_fn(t2, t_mid)
    k21 = kernel_fn(t_mid, t1)
    res = 0.0
    if isinstance(quadrature, str):
        if quadrature != "gaussian":
            raise ValueError("quadrature must be 'gaussian' or (nodes, weights)")
        comp = compose_gaussian(k32, k21)
        for x3, x1 in pins:
            res = max(res, abs(k31(x3, x1) - comp(x3, x1)))
        return res
    nodes, weights = (np.asarray(a) for a in quadrature)
    for x3, x1 in pins:
        mid = np.sum(weights * k32(x3, nodes) * k21(nodes, x1))
        res = max(res, abs(k31(x3, x1) - mid))
    return float(res)


def free_kernel_fn(m=1.0, hbar=1.0):
    return lambda t_out, t_in: free_kernel(t_out - t_in, m, hbar)


def relativistic_kernel_fn(delta=0.05, m=1.0, hbar=1.0):
    """Damped relativistic kernels (exact semigroup) for q-space composition."""
    return lambda t_out, t_in: (
        lambda x_out, x_in: relativistic_semigroup_kernel(np.asarray(x_out) - np.asarray(x_in), t_out - t_in,
                                                          delta, m, hbar)
    )


def grid_kernel_fn(V, grid, eps, m=1.0, hbar=1.0, damping=0.0):
    """Grid kernels on a fixed lattice spacing: K(t_out, t_in) uses (t_out - t_in)/eps links."""

    def fn(t_out, t_in):
        links = int(round((t_out - t_in) / eps))
        km = lattice_grid_general(V, TimeLattice(t_in, t_out, links - 1), grid, m, hbar, damping, check=False)
        x = grid.x

        def k(x_out, x_in):
            i = np.abs(x[:, None] - np.atleast_1d(x_out)[None, :]).argmin(0)
            j = np.abs(x[:, None] - np.atleast_1d(x_in)[None, :]).argmin(0)
            out = km.matrix[i[:, None], j[None, :]] if np.ndim(x_out) or np.ndim(x_in) else km.matrix[i[0], j[0]]
            return np.squeeze(out)

        return k

    return fn


def relativistic_composition_residual(T1=0.6, T2=0.8, delta=0.05, m=1.0, hbar=1.0,
                                      pins=((0.3, 0.0), (1.8, 0.2), (-0.5, 0.4)), half_width=60.0):
    """q-space composition residual of damped relativistic kernels.

    The middle integral uses adaptive quadrature with breakpoints at the
    light-cone singularities smoothed by the damping.
    """
    from scipy import integrate

    fn = relativistic_kernel_fn(delta, m, hbar)
    k31, k32, k21 = fn(T1 + T2, 0.0), fn(T1 + T2, T1), fn(T1, 0.0)
    res = 0.0
    for x3, x1 in pins:
        cuts = sorted({x1 - T1, x1 + T1, x3 - T2, x3 + T2})
        edges = [-half_width + min(x1, x3)] + cuts + [half_width + max(x1, x3)]

        def f(y, part):
            v = k32(x3, y) * k21(y, x1)
            return v.real if part == 0 else v.imag

        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            re = integrate.quad(f, a, b, args=(0,), limit=400, epsabs=1e-11, epsrel=1e-10)[0]
            im = integrate.quad(f, a, b, args=(1,), limit=400, epsabs=1e-11, epsrel=1e-10)[0]
            total += re + 1j * im
        res = max(res, abs(k31(x3, x1) - total))
    return res
