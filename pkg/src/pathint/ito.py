"""Higher-derivative (Ornstein-Uhlenbeck) regularization of the free particle.

Pins are fixed at x(0) = 0 and x(T) = x; the velocity process is integrated
out analytically, so everything here is closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import TailUnbounded
from .numerics.amplitude import DIMENSIONLESS, INV_SQRT_LENGTH, ComplexAmplitude
from .oracles.closed_form import free_propagator


def ito_a(nu, m=1.0, hbar=1.0) -> complex:
    """Principal root of a^2 = 1 - i m nu / hbar (Re a > 0)."""
    return cmath.sqrt(1 - 1j * m * nu / hbar)


@dataclass(frozen=True)
class ItoSpec:
    nu: float
    m: float = 1.0
    hbar: float = 1.0
    T: float = 1.0
    x: float = 0.0
    a: complex = field(init=False)

    def __post_init__(self):
        for name in ("nu", "m", "hbar", "T"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        a = ito_a(self.nu, self.m, self.hbar)
        if not a.real > 0:
            raise ValueError("branch condition Re a > 0 violated")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class PiecewiseConstantSource:
    """g(t) = values[k] on [breakpoints[k], breakpoints[k+1]), zero elsewhere."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        b = tuple(float(x) for x in self.breakpoints)
        v = tuple(complex(x) for x in self.values)
        if len(b) != len(v) + 1 or any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("need increasing breakpoints, one more than values")
        if not all(math.isfinite(x) for x in b):
            raise ValueError("source must have compact support")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, lam, T):
        return cls((0.0, T), (lam,))

    def __call__(self, t):
        t = np.asarray(t, float)
        out = np.zeros(t.shape, complex)
        for (lo, hi), v in zip(zip(self.breakpoints, self.breakpoints[1:]), self.values):
            out[(t >= lo) & (t < hi)] = v
        return out


def f_factor(a, T) -> complex:
    """F = int_0^T int_0^T e^{-a|t-u|} dt du = 2T/a - (2/a^2)(1 - e^{-aT}).

    A Taylor series is used when |aT| is small to avoid cancellation.
    """
    a = complex(a)
    if not T > 0:
        raise ValueError("T must be positive")
    if a == 0:
        raise ValueError("a must be nonzero")
    z = a * T
    if abs(z) < 0.1:
        # F = T^2 * sum_k 2 (-z)^k / (k+2)!
        s = 0j
        term = 1.0 + 0j
        for k in range(30):
            s += 2 * term / math.factorial(k + 2)
            term *= -z
        return complex(T * T * s)
    return complex(2 * T / a - 2 / (a * a) * (1 - cmath.exp(-z)))


def _cross_term(a, len1, len2, gap):
    """int over t in I1, u in I2 of e^{-a(u - t)}, with I2 a gap after I1."""
    e1 = -complex(np.expm1(-a * len1))
    e2 = -complex(np.expm1(-a * len2))
    return e1 * e2 * cmath.exp(-a * gap) / (a * a)


def ou_double_integral(g: PiecewiseConstantSource, a) -> complex:
    """int int g(t) g(u) e^{-a|t-u|} dt du, piece by piece in closed form."""
    a = complex(a)
    b = g.breakpoints
    v = g.values
    total = 0j
    for k in range(len(v)):
        total += v[k] * v[k] * f_factor(a, b[k + 1] - b[k])
        for l in range(k + 1, len(v)):
            cross = _cross_term(a, b[k + 1] - b[k], b[l + 1] - b[l], b[l] - b[k + 1])
            total += 2 * v[k] * v[l] * cross
    return total


def ou_generating_functional(g: PiecewiseConstantSource, nu, a, hbar=1.0) -> ComplexAmplitude:
    """exp[-(nu / 4 a hbar^2) int int g(t) g(u) e^{-a|t-u|} dt du]."""
    a = complex(a)
    if not a.real > 0:
        raise ValueError("requires Re a > 0")
    val = cmath.exp(-nu / (4 * a * hbar * hbar) * ou_double_integral(g, a))
    return ComplexAmplitude(val, DIMENSIONLESS)


def ito_propagator(spec: ItoSpec) -> ComplexAmplitude:
    """sqrt(a / (nu F pi)) exp(-a x^2 / (nu F)), principal square root."""
    a = spec.a
    F = f_factor(a, spec.T)
    c = a / (spec.nu * F)
    val = cmath.sqrt(c / math.pi) * cmath.exp(-c * spec.x**2)
    return ComplexAmplitude(val, INV_SQRT_LENGTH, {"a": a, "F": F})


def ito_limit_exponent(spec: ItoSpec) -> complex:
    """The coefficient a / (nu F); tends to -i m / (2 T hbar)."""
    return spec.a / (spec.nu * f_factor(spec.a, spec.T))


def ito_normalization(spec: ItoSpec) -> complex:
    """int ito_propagator dx over the real line, in closed form.

    Equals 1 whenever Re(a / nu F) > 0; raises otherwise since the Gaussian
    integral diverges.
    """
    c = ito_limit_exponent(spec)
    if not c.real > 0:
        raise ValueError("Gaussian not integrable: Re(a / nu F) <= 0")
    return complex(cmath.sqrt(c / math.pi) * cmath.sqrt(math.pi / c))


@dataclass
class LimitStudy:
    nu: np.ndarray
    error: np.ndarray
    slope: float
    monotone: bool

    def rows(self):
        return [{"nu": float(n), "rel_error": float(e)} for n, e in zip(self.nu, self.error)]


def ito_limit_study(nu_list, m=1.0, hbar=1.0, T=1.0, x=1.0) -> LimitStudy:
    """Relative error against the free propagator, plus a log-log slope fit."""
    nu = np.asarray(nu_list, float)
    if nu.size < 2 or np.any(np.diff(nu) <= 0):
        raise ValueError("nu_list must be increasing with at least two entries")
    exact = free_propagator(x, 0.0, T, m, hbar).value
    err = np.array([abs(ito_propagator(ItoSpec(n, m, hbar, T, x)).value - exact) / abs(exact) for n in nu])
    slope = float(np.polyfit(np.log(nu), np.log(err), 1)[0])
    return LimitStudy(nu, err, slope, bool(np.all(np.diff(err) < 0)))


# -- Fourier-class potentials --------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    l1_norm: float
    tail_bound: float
    tail_exponent: float


def _tail_fit(s, w):
    """Fit |w| ~ C |s|^-p on the outer half-decade; returns (p, C, rms residual)."""
    s = np.abs(s)
    keep = s >= s.max() / math.sqrt(10)
    s, w = s[keep], w[keep]
    if s.size < 4 or np.any(w <= 0):
        return None
    ls, lw = np.log(s), np.log(w)
    slope, icpt = np.polyfit(ls, lw, 1)
    resid = float(np.sqrt(np.mean((lw - (slope * ls + icpt)) ** 2)))
    return -slope, math.exp(icpt), resid


def fourier_potential_admissible(s, w, p_margin=0.05, tiny=1e-14) -> AdmissibilityReport:
    """Classify a sampled w(s) by whether int |w(s)| ds is finite.

    The table integral uses the trapezoid rule; each tail beyond the table is
    modelled as a power law fitted to the outermost half-decade. Tails that
    are monotone and already below ``tiny`` relative to the peak are bounded
    by an s^-2 continuation of the last sample. A tail exponent p <= 1 + ``p_margin`` marks the potential
    inadmissible; a tail that is growing, oscillating or otherwise not
    power-law like raises :class:`TailUnbounded`.
    """
    s = np.asarray(s, float)
    w = np.abs(np.asarray(w))
    if s.ndim != 1 or s.shape != w.shape or s.size < 16 or np.any(np.diff(s) <= 0):
        raise ValueError("need at least 16 samples on an increasing grid")
    body = float(integrate.trapezoid(w, s))
    peak = float(w.max())
    if peak == 0:
        return AdmissibilityReport(True, 0.0, 0.0, math.inf)
    tails = []
    for side in (s > 0, s < 0):
        ss, ww = s[side], w[side]
        if ss.size == 0:
            raise TailUnbounded("table does not extend on both sides of s = 0")
        order = np.argsort(np.abs(ss))
        end = ww[order[-1]]
        L = float(np.abs(ss).max())
        if end <= tiny * peak and np.all(np.diff(ww[order][-len(order) // 4:]) <= 0):
            # decayed and still falling; bound the rest by an s^-2 tail from the end
            tails.append((math.inf, float(end * L)))
            continue
        fit = _tail_fit(ss, ww)
        if fit is None:
            raise TailUnbounded("too few positive tail samples to establish decay")
        p, C, resid = fit
        if p <= 0 or resid > 0.1:
            raise TailUnbounded(f"tail is not a decaying power law (p={p:.3g}, misfit={resid:.2g})")
        p = float(p)
        tails.append((p, C * L ** (1 - p) / (p - 1) if p > 1 else math.inf))
    p_min = min(p for p, _ in tails)
    tail = sum(t for _, t in tails)
    ok = p_min > 1 + p_margin
    return AdmissibilityReport(bool(ok), body + tail if ok else math.inf, float(tail), float(p_min))
