"""Closed-form propagators used as ground truth.

All square roots are principal (Re >= 0, cut on the negative real axis).
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate, special

from ..errors import ExtrapolationFailed
from ..numerics.amplitude import INV_SQRT_LENGTH, ComplexAmplitude
from ..numerics.gaussian import GaussianKernel


def _require_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v!r}")


def free_propagator(x2, x1, T, m=1.0, hbar=1.0) -> ComplexAmplitude:
    """sqrt(m / (2 pi i hbar T)) exp(i m (x2 - x1)^2 / (2 hbar T))."""
    if T == 0:
        raise ValueError("T must be nonzero")
    pref = cmath.sqrt(m / (2j * math.pi * hbar * T))
    val = pref * cmath.exp(1j * m * (x2 - x1) ** 2 / (2 * hbar * T))
    return ComplexAmplitude(val, INV_SQRT_LENGTH)


def free_kernel(T, m=1.0, hbar=1.0) -> GaussianKernel:
    """The free propagator as a 1-D Gaussian kernel in ``(x'', x')``."""
    if T == 0:
        raise ValueError("T must be nonzero")
    c = 1j * m / (2 * hbar * T)
    return GaussianKernel.from_coefficients(cmath.sqrt(m / (2j * math.pi * hbar * T)), c, -2 * c, c)


def heat_kernel(x, y, T, nu=1.0) -> float:
    """(2 pi nu T)^(-1/2) exp(-(x - y)^2 / (2 nu T))."""
    _require_positive(T=T, nu=nu)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    out = np.exp(-((x - y) ** 2) / (2 * nu * T)) / np.sqrt(2 * np.pi * nu * T)
    return float(out) if out.ndim == 0 else out


def heat_gaussian_kernel(T, nu=1.0) -> GaussianKernel:
    _require_positive(T=T, nu=nu)
    c = -1.0 / (2 * nu * T)
    return GaussianKernel.from_coefficients(1 / math.sqrt(2 * math.pi * nu * T), c, -2 * c, c)


def euclidean_oscillator_kernel(x, y, T, nu=1.0, omega=1.0):
    """Imaginary-time kernel of d/dt = (nu/2) d^2/dx^2 - omega^2 x^2 / (2 nu).

    Mehler form; reduces to :func:`heat_kernel` as ``omega -> 0``.
    """
    _require_positive(T=T, nu=nu)
    if omega == 0:
        return heat_kernel(x, y, T, nu)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    sh = math.sinh(omega * T)
    ch = math.cosh(omega * T)
    expo = -omega * ((x * x + y * y) * ch - 2 * x * y) / (2 * nu * sh)
    out = np.sqrt(omega / (2 * np.pi * nu * sh)) * np.exp(expo)
    return float(out) if out.ndim == 0 else out


def harmonic_propagator(x2, x1, T, m=1.0, omega=1.0, hbar=1.0) -> ComplexAmplitude:
    """Real-time oscillator kernel for H = p^2/2m + m omega^2 x^2/2, 0 < omega T < pi."""
    s = math.sin(omega * T)
    if not 0 < omega * T < math.pi:
        raise ValueError("requires 0 < omega*T < pi (single-valued branch)")
    pref = cmath.sqrt(m * omega / (2j * math.pi * hbar * s))
    expo = 1j * m * omega * ((x1 * x1 + x2 * x2) * math.cos(omega * T) - 2 * x1 * x2) / (2 * hbar * s)
    return ComplexAmplitude(pref * cmath.exp(expo), INV_SQRT_LENGTH)


# --- relativistic free particle -------------------------------------------------


def relativistic_closed_form(dq, T, m=1.0, hbar=1.0) -> complex:
    """(1/2 pi hbar) int exp{(i/hbar)[p dq - T sqrt(p^2 + m^2)]} dp in closed form.

    In units hbar = 1, timelike: -(m T / 2 s) H1^(2)(m s) with
    s = sqrt(T^2 - dq^2); spacelike: (i m T / pi s) K1(m s) with
    s = sqrt(dq^2 - T^2). The light cone itself is singular.
    """
    _require_positive(T=T)
    x = abs(dq)
    if x == T:
        raise ValueError("closed form is singular on the light cone")
    if m == 0:
        return complex(1j / math.pi * T / (x * x - T * T))
    # rescale to hbar = 1: p -> hbar k
    xs, ts = x / hbar, T / hbar
    if xs < ts:
        s = math.sqrt(ts * ts - xs * xs)
        val = -(m * ts / (2 * s)) * special.hankel2(1, m * s)
    else:
        s = math.sqrt(xs * xs - ts * ts)
        val = 1j * m * ts / (math.pi * s) * special.k1(m * s)
    return complex(val) / hbar


def relativistic_contour(dq, T, m=1.0, hbar=1.0) -> complex:
    """The same integral on rays rotated by +-pi/4 into the decaying half planes.

    Each half line p >= 0, p <= 0 is rotated towards the side where its
    asymptotic phase ``(+-dq - T)|p|`` decays; the branch points +-im are never
    crossed because the rotation is by less than pi/2.
    """
    _require_positive(T=T)
    out = 0.0 + 0.0j
    for sgn in (1.0, -1.0):
        k = sgn * dq - T
        w = cmath.exp(1j * math.pi / 4 * (1.0 if k > 0 else -1.0))

        def f(s, part, sgn=sgn, w=w):
            p = sgn * s * w
            v = cmath.exp(1j * (p * dq - T * cmath.sqrt(p * p + m * m)) / hbar) * w
            return v.real if part == 0 else v.imag

        kw = dict(epsabs=1e-15, epsrel=1e-13, limit=800)
        re = integrate.quad(f, 0, np.inf, args=(0,), **kw)[0]
        im = integrate.quad(f, 0, np.inf, args=(1,), **kw)[0]
        out += re + 1j * im
    return out / (2 * math.pi * hbar)


DEFAULT_DELTAS = (0.05, 0.04, 0.03, 0.02, 0.01)


def damped_momentum_integral(dq, T, delta, m=1.0, hbar=1.0, p_factor=1.0, step_factor=1.0) -> complex:
    """(1/2 pi hbar) int e^{-delta |p|} e^{(i/hbar)[p dq - T sqrt(p^2+m^2)]} dp.

    Composite 16-point Gauss-Legendre on ``[0, 60/delta]`` (folded to the half
    line). ``p_factor``/``step_factor`` scale the range and panel width for
    self-convergence checks.
    """
    cut = 60.0 / delta * p_factor
    h = min(0.5, 1.5 * hbar / (abs(dq) + T + 1e-12)) * step_factor
    n_panels = int(math.ceil(cut / h))
    edges = np.linspace(0.0, cut, n_panels + 1)
    xg, wg = np.polynomial.legendre.leggauss(16)
    a = edges[:-1, None]
    b = edges[1:, None]
    p = (0.5 * (b - a) * xg + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * wg).ravel()
    om = np.sqrt(p * p + m * m)
    f = np.exp(-delta * p - 1j * T * om / hbar) * 2 * np.cos(p * dq / hbar)
    return complex(np.sum(w * f) / (2 * math.pi * hbar))


def relativistic_free_propagator(dq, T, m=1.0, hbar=1.0, deltas=DEFAULT_DELTAS, tol=1e-4,
                                 **quad_kw) -> ComplexAmplitude:
    """Damped quadrature extrapolated to zero damping.

    A polynomial through all ladder points gives the extrapolant; a fit of one
    lower degree on the smallest-delta points bounds its error, and
    :class:`ExtrapolationFailed` is raised when that bound exceeds ``tol``
    relative to the value (e.g. too close to the light cone).
    """
    _require_positive(T=T)
    d = np.asarray(sorted(deltas), float)
    if len(d) < 3:
        raise ValueError("need at least three damping values")
    vals = np.array([damped_momentum_integral(dq, T, x, m, hbar, **quad_kw) for x in d])
    est = _poly_extrapolate(d, vals, len(d) - 1)
    alt = _poly_extrapolate(d[:-1], vals[:-1], len(d) - 2)
    err = abs(est - alt)
    if err > tol * max(abs(est), 1e-300):
        raise ExtrapolationFailed(
            f"damping extrapolation unstable: estimate {est:.6g}, spread {err:.3e}"
        )
    return ComplexAmplitude(est, INV_SQRT_LENGTH, meta={"deltas": tuple(d), "error_bound": err})


def _poly_extrapolate(x, y, degree) -> complex:
    v = np.vander(x, degree + 1, increasing=True)
    coef = np.linalg.lstsq(v, y, rcond=None)[0]
    return complex(coef[0])


def relativistic_semigroup_kernel(dq, T, delta, m=1.0, hbar=1.0):
    """Kernel of exp(-(delta + i) T sqrt(P^2 + m^2) / hbar), delta > 0.

    Closed form (m tau / pi s) K1(m s) / hbar with tau = (delta + i) T / hbar and
    s = sqrt((dq/hbar)^2 + tau^2). Unlike the zero-damping kernel it decays in
    ``dq`` and is an exact semigroup in ``T``, so q-space compositions converge
    absolutely. ``dq`` may be an array.
    """
    _require_positive(T=T, delta=delta)
    x = np.asarray(dq, float) / hbar
    tau = (delta + 1j) * T / hbar
    s = np.sqrt(x * x + tau * tau + 0j)
    if m == 0:
        out = tau / (np.pi * s * s)
    else:
        out = m * tau / (np.pi * s) * special.kv(1, m * s)
    out = out / hbar
    return complex(out) if out.ndim == 0 else out
