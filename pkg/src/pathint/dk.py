"""Continuous-time (Wiener-regularized) phase-space path integral.

The amplitude at finite diffusion ``nu`` is

    2 pi hbar e^{nu T / 2 hbar} E[exp{(i/hbar)[sum pbar dq - eps sum H(mid)]}] * mass,

where the expectation is over pinned two-dimensional Brownian bridges with
diffusion ``nu`` and ``mass`` is the 2-D heat kernel at the pins. Quadratic
symbols give a complex Gaussian chain that is composed in closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from . import kernels
from .errors import NonMonotoneWarning, TailUnbounded, UnsupportedSymbol, VarianceExplosion
from .numerics.amplitude import DIMENSIONLESS, ComplexAmplitude
from .numerics.bridge import DEFAULT_BLOCK, bridge_blocks
from .numerics.chainquad import chain_quadrature
from .numerics.estimate import PropagatorEstimate, mean_and_stderr
from .numerics.gaussian import GaussianKernel, compose_power
from .numerics.lattice import TimeLattice
from .numerics.rng import RandomStream
from .oracles.fock import polar_rule
from .oracles.symbols import HamiltonianSymbol

RULES = ("midpoint", "left")


@dataclass(frozen=True)
class DKConfig:
    """Symbol, diffusion, lattice, pins ``(p2, q2, p1, q1)`` and hbar."""

    H: HamiltonianSymbol
    nu: float
    lat: TimeLattice
    pins: tuple = (0.0, 0.0, 0.0, 0.0)
    hbar: float = 1.0
    rule: str = "midpoint"

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if self.H.ordering != "antinormal":
            raise ValueError("the symbol must carry the antinormal tag")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")
        object.__setattr__(self, "pins", tuple(float(x) for x in self.pins))

    def with_(self, **kw) -> "DKConfig":
        return replace(self, **kw)

    @property
    def log_prefactor(self) -> float:
        """log of 2 pi hbar e^{nu T / 2 hbar}."""
        return math.log(2 * math.pi * self.hbar) + self.nu * self.lat.T / (2 * self.hbar)


_DP = np.array([1.0, 0.0, -1.0, 0.0])
_DQ = np.array([0.0, 1.0, 0.0, -1.0])
_PB = np.array([0.5, 0.0, 0.5, 0.0])
_QB = np.array([0.0, 0.5, 0.0, 0.5])
_PL = np.array([0.0, 0.0, 1.0, 0.0])


def _sym(u, v):
    return 0.5 * (np.outer(u, v) + np.outer(v, u))


def dk_link_kernel(H: HamiltonianSymbol, nu, eps, hbar=1.0, rule="midpoint", phase=True) -> GaussianKernel:
    """Wiener transition kernel times the phase of one link, ``z = (p', q', p, q)``."""
    M = -(np.outer(_DP, _DP) + np.outer(_DQ, _DQ)) / (2 * nu * eps)
    L = np.zeros(4, complex)
    const = 0j
    if phase:
        hpp, hpq, hqq, hp, hq, h0 = H.quadratic_parts()
        k = 1j / hbar
        M = M + k * _sym(_PB if rule == "midpoint" else _PL, _DQ)
        M = M - k * eps * (hpp * np.outer(_PB, _PB) + hpq * _sym(_PB, _QB) + hqq * np.outer(_QB, _QB))
        L = -k * eps * (hp * _PB + hq * _QB)
        const = -k * eps * h0
    return GaussianKernel.from_quadratic(M, L, constant=const, prefactor=1 / (2 * math.pi * nu * eps))


def _pins(cfg):
    p2, q2, p1, q1 = cfg.pins
    return np.array([p2, q2]), np.array([p1, q1])


def _dk_extra(cfg, eps):
    H, hb = cfg.H, cfg.hbar

    def extra(z1, z0):
        p1, q1 = z1[:, 0], z1[:, 1]
        p0, q0 = z0[:, 0], z0[:, 1]
        pm, qm = 0.5 * (p1 + p0), 0.5 * (q1 + q0)
        p_rule = pm if cfg.rule == "midpoint" else p0
        return 1j / hb * (p_rule * (q1 - q0) - eps * H(pm, qm))

    return extra


def dk_lattice_amplitude(cfg: DKConfig, phase=True, prefactor=True) -> ComplexAmplitude:
    """Finite-nu, finite-N amplitude.

    Quadratic symbols compose the link kernel N + 1 times in closed form;
    other polynomial symbols use direct quadrature for N <= 3. ``phase=False``
    drops the phase factor (leaving the pinned-measure mass) and
    ``prefactor=False`` drops 2 pi hbar e^{nu T / 2 hbar}.
    """
    lat, nu, hb = cfg.lat, cfg.nu, cfg.hbar
    eps = lat.eps
    z_out, z_in = _pins(cfg)
    meta = {"nu": nu, "N": lat.N, "n_links": lat.n_links, "rule": cfg.rule}
    if not phase or (cfg.H.is_polynomial and "quadratic" in cfg.H.tags):
        k = compose_power(dk_link_kernel(cfg.H, nu, eps, hb, cfg.rule, phase), lat.n_links)
        log_val = complex(k.exponent(z_out, z_in))
        method = "gaussian-chain"
    elif cfg.H.is_polynomial and 1 <= lat.N <= 3:
        kappa = 1 / (2 * nu * eps)
        val = chain_quadrature(kappa, z_out, z_in, lat.N, _dk_extra(cfg, eps))
        log_val = complex(np.log(complex(val))) - (lat.N + 1) * math.log(2 * math.pi * nu * eps)
        method = "quadrature"
    else:
        raise UnsupportedSymbol("non-quadratic symbols need polynomial H and 1 <= N <= 3")
    if prefactor:
        log_val += cfg.log_prefactor
    return ComplexAmplitude(np.exp(log_val), DIMENSIONLESS, {**meta, "method": method})


def dk_measure_mass(cfg: DKConfig) -> float:
    """2-D heat kernel of the pinned measure at the pins (the phase-free lattice value)."""
    z_out, z_in = _pins(cfg)
    d2 = float(np.sum((z_out - z_in) ** 2))
    s = cfg.nu * cfg.lat.T
    return math.exp(-d2 / (2 * s)) / (2 * math.pi * s)


# -- nu -> infinity ------------------------------------------------------------


def richardson_rule(k=22):
    """Continuum-in-eps amplitude at fixed nu.

    Evaluates lattices with 2^k and 2^(k+2) links and combines them as
    (4 a(eps/4) - a(eps)) / 3, removing the O(eps) lattice bias.
    """

    def amplitude(cfg: DKConfig) -> complex:
        T = cfg.lat.T
        coarse = dk_lattice_amplitude(cfg.with_(lat=TimeLattice(0.0, T, 2**k - 1))).value
        fine = dk_lattice_amplitude(cfg.with_(lat=TimeLattice(0.0, T, 2 ** (k + 2) - 1))).value
        return (4 * fine - coarse) / 3

    amplitude.label = f"richardson(2^{k}, 2^{k + 2} links)"
    return amplitude


def fixed_spread_rule(c=32.0):
    """N = ceil(c nu T / hbar): keeps the per-step Wiener spread nu eps fixed."""

    def amplitude(cfg: DKConfig) -> complex:
        N = int(math.ceil(c * cfg.nu * cfg.lat.T / cfg.hbar))
        return dk_lattice_amplitude(cfg.with_(lat=TimeLattice(0.0, cfg.lat.T, N))).value

    amplitude.label = f"N = ceil({c:g} nu T / hbar)"
    return amplitude


@dataclass
class DKExtrapolation:
    estimate: PropagatorEstimate
    nus: np.ndarray
    amplitudes: np.ndarray
    oracle_errors: np.ndarray | None = None
    model: str = ""
    extra: dict = field(default_factory=dict)


def _inverse_poly_fit(nus, vals, degree):
    x = 1.0 / np.asarray(nus, float)
    X = np.vander(x, degree + 1, increasing=True).astype(complex)
    coef, *_ = np.linalg.lstsq(X, vals, rcond=None)
    resid = float(np.abs(X @ coef - vals).max())
    return complex(coef[0]), resid


def dk_extrapolate(template: DKConfig, nu_list, N_rule: Callable | None = None, degree=None,
                   oracle=None, floor=1e-6) -> DKExtrapolation:
    """Fit amplitude(nu) as a polynomial in 1/nu and return the nu -> infinity value.

    The default fit degree is ``len(nu_list) - 2``, leaving one degree of
    freedom. The error bar is the change in the extrapolant when the degree
    drops by one. With ``oracle`` given, a :class:`NonMonotoneWarning` is
    emitted if the distance to it does not shrink along ``nu_list``; distances
    below ``floor`` relative to the oracle count as converged.
    """
    nus = np.asarray(nu_list, float)
    if nus.size < 3 or np.any(np.diff(nus) <= 0):
        raise ValueError("nu_list must be increasing with at least three entries")
    rule = N_rule or richardson_rule()
    vals = np.array([rule(template.with_(nu=float(n))) for n in nus], complex)
    deg = degree if degree is not None else nus.size - 2
    if not 1 <= deg <= nus.size - 1:
        raise ValueError("degree must lie between 1 and len(nu_list) - 1")
    est, resid = _inverse_poly_fit(nus, vals, deg)
    alt, _ = _inverse_poly_fit(nus, vals, deg - 1) if deg > 1 else (est, 0.0)
    err = None
    if oracle is not None:
        err = np.abs(vals - complex(oracle))
        live = np.maximum(err, floor * abs(complex(oracle)))
        if np.any(np.diff(live) > 0):
            warnings.warn("distance to the oracle is not decreasing in nu", NonMonotoneWarning, stacklevel=2)
    params = {"nu_list": nus.tolist(), "degree": deg, "fit_residual": resid,
              "N_rule": getattr(rule, "label", "custom")}
    e = PropagatorEstimate(ComplexAmplitude(est, DIMENSIONLESS), abs(est - alt), "dk-extrapolate", params)
    return DKExtrapolation(e, nus, vals, err, f"polynomial of degree {deg} in 1/nu")


# -- Monte Carlo -------------------------------------------------------------


def dk_mc_crosscheck(cfg: DKConfig, n_samples, stream: RandomStream, block_size=DEFAULT_BLOCK,
                     oracle_scale=None) -> PropagatorEstimate:
    """Sample pinned (p, q) bridges and average the lattice phase.

    Uses the same lattice as :func:`dk_lattice_amplitude`, so the two agree in
    expectation. Blocks draw from ``stream.substream(b)`` and sums are exactly
    rounded, so the result is reproducible bit for bit.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    if not cfg.H.is_polynomial:
        raise UnsupportedSymbol("Monte Carlo needs a polynomial symbol")
    lat, hb = cfg.lat, cfg.hbar
    p2, q2, p1, q1 = cfg.pins
    coeffs = np.ascontiguousarray(cfg.H.coefficient_matrix())
    scale = math.exp(cfg.log_prefactor) * dk_measure_mass(cfg)
    ref = oracle_scale if oracle_scale is not None else 1.0
    predicted = scale / math.sqrt(n_samples)
    if predicted > 0.1 * ref:
        warnings.warn(f"predicted stderr {predicted:.3g} exceeds 10% of the oracle scale {ref:.3g}",
                      VarianceExplosion, stacklevel=2)
    k = kernels.active()
    phases = np.empty(n_samples, complex)
    left = cfg.rule == "left"
    for start, stop, paths in bridge_blocks(cfg.nu, lat, (p1, q1), (p2, q2), n_samples, stream,
                                            block_size, components=2):
        act = np.empty(stop - start)
        k.phase_action(paths[0], paths[1], lat.eps, coeffs, left, act)
        phases[start:stop] = np.exp(1j * act / hb)
    mean, se = mean_and_stderr(phases)
    params = {"nu": cfg.nu, "N": lat.N, "n_samples": n_samples, "seed": stream.seed,
              "stream_index": stream.stream_index, "backend": kernels.backend_name()}
    return PropagatorEstimate(ComplexAmplitude(scale * mean, DIMENSIONLESS), scale * se, "dk-mc", params)


# -- technical assumptions ---------------------------------------------------


@dataclass(frozen=True)
class AssumptionReport:
    integral_a: dict
    integral_b: float
    beta: float
    c_heuristic: bool
    verdict: str
    notes: tuple = ()
    cross_check: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            out[(i + k, j + l)] = out.get((i + k, j + l), 0.0) + c * d
    return out


def gaussian_moment_integral(coeffs: dict, alpha) -> float:
    """int P(p, q) e^{-alpha (p^2 + q^2)} dp dq for a polynomial dict, in closed form."""
    total = 0.0
    for (i, j), c in coeffs.items():
        if i % 2 or j % 2:
            continue
        total += c * math.gamma((i + 1) / 2) * math.gamma((j + 1) / 2) / alpha ** ((i + j) / 2 + 1)
    return total


def _radial_integral(func, alpha, power, r_max=60.0, n_r=400, n_theta=64):
    """Polar quadrature of |H|^power e^{-alpha r^2}; None if the integrand does not decay.

    Decay is judged on the outer radii: the angular maximum must fall by
    many orders of magnitude from its peak and keep falling to ``r_max``.
    """
    p, q, w = polar_rule(r_max, n_r, n_theta)
    with np.errstate(over="ignore", invalid="ignore"):
        h = np.abs(np.asarray(func(p, q), complex))
        log_f = power * np.log(np.maximum(h, 1e-300)) - alpha * (p * p + q * q)
    if not np.all(np.isfinite(log_f)):
        return None
    r = np.hypot(p, q).reshape(n_r, n_theta)[:, 0]
    prof = log_f.reshape(n_r, n_theta).max(axis=1) + np.log(r)
    tail = prof[int(0.9 * n_r):]
    if prof[-1] > prof.max() - 30 or np.any(np.diff(tail) > 0):
        return None
    return float(np.sum(w * np.exp(log_f)))


def _semibounded(H: HamiltonianSymbol, r_in=50.0, r_out=100.0, n=721) -> bool:
    """Heuristic: the minimum on a far ring does not undercut the minimum on the inner disk."""
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    ring = np.real(H(r_out * np.cos(th), r_out * np.sin(th))).min()
    p, q, _ = polar_rule(r_in, 48, n)
    disk = np.real(H(p, q)).min()
    return bool(ring >= disk)


def dk_assumption_check(H: HamiltonianSymbol, hbar=1.0, alpha_grid=(0.1, 0.5, 1.0, 2.0), beta=None,
                        rtol=1e-8) -> AssumptionReport:
    """Evaluate the sufficient conditions (a), (b) and a heuristic stand-in for (c).

    (a) int H^2 e^{-alpha(p^2+q^2)} finite for each alpha in the grid;
    (b) int H^4 e^{-beta(p^2+q^2)} finite at ``beta < 1/2hbar``;
    (c) essential self-adjointness is not decidable here. The flag reports
    "polynomial and semibounded" and is labelled non-rigorous.
    Polynomial symbols use closed-form Gaussian moments cross-checked by
    quadrature; other symbols use quadrature with a decay test.
    """
    beta = 0.8 / (2 * hbar) if beta is None else beta
    if not 0 < beta < 1 / (2 * hbar):
        raise ValueError("beta must lie in (0, 1/(2 hbar))")
    notes = ["(c) is a heuristic: polynomial and semibounded; not a proof of essential self-adjointness"]
    a_vals: dict = {}
    cross: dict = {}
    if H.is_polynomial:
        sq = _poly_mul(H.coeffs, H.coeffs)
        quart = _poly_mul(sq, sq)
        for al in alpha_grid:
            a_vals[al] = gaussian_moment_integral(sq, al)
            quad = _radial_integral(H, al, 2, r_max=_gauss_radius(al, 2 * H.degree))
            cross[("a", al)] = abs(quad - a_vals[al]) / max(abs(a_vals[al]), 1e-300)
        b_val = gaussian_moment_integral(quart, beta)
        quad_b = _radial_integral(H, beta, 4, r_max=_gauss_radius(beta, 4 * H.degree))
        cross[("b", beta)] = abs(quad_b - b_val) / max(abs(b_val), 1e-300)
        bad = [k for k, v in cross.items() if v > rtol]
        if bad:
            raise TailUnbounded(f"closed form and quadrature disagree for {bad}")
        c_flag = _semibounded(H)
    else:
        for al in alpha_grid:
            v = _radial_integral(H, al, 2)
            a_vals[al] = math.inf if v is None else v
        v = _radial_integral(H, beta, 4)
        b_val = math.inf if v is None else v
        c_flag = False
        notes.append("non-polynomial symbol: (a) and (b) judged by quadrature and a decay test")
    ok = all(math.isfinite(v) for v in a_vals.values()) and math.isfinite(b_val)
    return AssumptionReport(a_vals, b_val, beta, c_flag, "pass" if ok else "fail", tuple(notes), cross)


def _gauss_radius(alpha, degree):
    """Radius beyond which r^(degree+1) e^{-alpha r^2} is below 1e-18 of its peak."""
    r = max(1.0, math.sqrt(max(degree, 1) / (2 * alpha)))
    peak = (degree + 1) * math.log(r) - alpha * r * r
    while (degree + 1) * math.log(r) - alpha * r * r > peak - 42:
        r *= 1.1
    return r


__all__: Any = [
    "AssumptionReport", "DKConfig", "DKExtrapolation", "dk_assumption_check", "dk_extrapolate",
    "dk_lattice_amplitude", "dk_link_kernel", "dk_mc_crosscheck", "dk_measure_mass",
    "fixed_spread_rule", "gaussian_moment_integral", "richardson_rule",
]
