"""Ornstein-Uhlenbeck regularization of the free particle."""

import math

import numpy as np
import pytest

from pathint.errors import TailUnbounded
from pathint.ito import (ItoSpec, PiecewiseConstantSource, f_factor, fourier_potential_admissible, ito_a,
                         ito_limit_exponent, ito_limit_study, ito_normalization, ito_propagator,
                         ou_double_integral, ou_generating_functional)
from pathint.oracles.closed_form import free_propagator

# mpmath nested quadrature, 25 digits
F_1M2I = 0.5696982624052503904 + 0.3507277639668246472j
ITO_NU100_X1 = 0.3863218146502579249 - 0.0814804006650167986j
# g = 2 on [0, .3), 0 on [.3, .5), -1 + .5i on [.5, 1.2), a = 1.5 - .5i; mpmath with breakpoints
OU_PIECEWISE = 0.2691970126455584107 - 0.2610899012464407716j


def _double_integral(g, a, T, n=200):
    """Gauss-Legendre on each side of the diagonal, where the integrand is smooth."""
    x, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * T * (x + 1)
    wt = 0.5 * T * w
    # u in [0, t]: substitute u = t s, s in [0, 1]
    s = 0.5 * (x + 1)
    ws = 0.5 * w
    u = t[:, None] * s[None, :]
    inner = np.sum(ws[None, :] * t[:, None] * g(u) * np.exp(-a * (t[:, None] - u)), axis=1)
    return 2 * np.sum(wt * g(t) * inner)


def test_f_factor_frozen_and_special_value():
    assert abs(f_factor(1 - 2j, 1.0) - F_1M2I) < 1e-15
    assert abs(f_factor(1.0, 1.0) - 2 * math.exp(-1)) < 1e-15


@pytest.mark.parametrize("a", [0.3, 2.0 - 1.5j, 5e-3 + 2e-3j, 20 - 20j])
def test_f_factor_matches_quadrature(a):
    ref = _double_integral(lambda t: np.ones_like(t), a, 1.7)
    assert abs(f_factor(a, 1.7) - ref) < 1e-12 * max(1, abs(ref))


def test_f_factor_series_branch_is_continuous():
    below = f_factor(0.0999, 1.0)
    above = f_factor(0.1001, 1.0)
    assert abs(below - above) < 1e-4
    # series and closed form agree where both are accurate
    a = 0.09
    assert abs(f_factor(a, 1.0) - (2 / a - 2 / a**2 * (1 - math.exp(-a)))) < 1e-12
    with pytest.raises(ValueError):
        f_factor(0.0, 1.0)
    with pytest.raises(ValueError):
        f_factor(1.0, 0.0)


def test_ou_double_integral_piecewise():
    a = 1.5 - 0.5j
    split = PiecewiseConstantSource((0.0, 0.4, 1.0), (1.0, 1.0))
    assert abs(ou_double_integral(split, a) - f_factor(a, 1.0)) < 1e-14
    g = PiecewiseConstantSource((0.0, 0.3, 0.5, 1.2), (2.0, 0.0, -1.0 + 0.5j))
    assert abs(ou_double_integral(g, a) - OU_PIECEWISE) < 1e-14


def test_generating_functional():
    a = ito_a(3.0)
    g = PiecewiseConstantSource.constant(0.7, 1.0)
    v = ou_generating_functional(g, 3.0, a).value
    assert abs(v - np.exp(-3.0 / (4 * a) * 0.49 * f_factor(a, 1.0))) < 1e-14
    with pytest.raises(ValueError):
        ou_generating_functional(g, 3.0, -1.0)
    with pytest.raises(ValueError):
        PiecewiseConstantSource((0.0, 1.0, 0.5), (1.0, 2.0))


def test_ito_propagator_frozen():
    assert abs(ito_propagator(ItoSpec(100.0, x=1.0)).value - ITO_NU100_X1) < 1e-14


def test_normalization_and_limit_exponent():
    for nu in (1.0, 1e2, 1e5):
        assert abs(ito_normalization(ItoSpec(nu)) - 1) < 1e-14
    c = ito_limit_exponent(ItoSpec(1e8))
    assert abs(c - (-0.5j)) < 1e-3


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_approaches_free_particle(x):
    exact = free_propagator(x, 0.0, 1.0).value
    err = [abs(ito_propagator(ItoSpec(nu, x=x)).value - exact) / abs(exact) for nu in (1e3, 1e5, 1e7)]
    assert err[0] > err[1] > err[2]
    assert err[2] < 5e-4


def test_limit_study_slope():
    study = ito_limit_study([1e2, 1e3, 1e4, 1e5], x=1.0)
    assert study.monotone
    assert study.slope == pytest.approx(-0.5, abs=0.03)
    assert [r["nu"] for r in study.rows()] == [1e2, 1e3, 1e4, 1e5]
    with pytest.raises(ValueError):
        ito_limit_study([10.0, 1.0])


def test_spec_validation():
    with pytest.raises(ValueError):
        ItoSpec(-1.0)
    assert ItoSpec(2.0).a.real > 0


# -- Fourier-class admissibility ----------------------------------------------


def test_admissibility_classes():
    s = np.linspace(-200, 200, 4001)
    ok = fourier_potential_admissible(s, 1 / (1 + s * s))
    assert ok.admissible and ok.tail_exponent == pytest.approx(2.0, abs=0.05)
    assert ok.l1_norm == pytest.approx(math.pi, abs=1e-3)
    bad = fourier_potential_admissible(s, 1 / (1 + np.abs(s)))
    assert not bad.admissible and bad.l1_norm == math.inf
    gauss = fourier_potential_admissible(s, np.exp(-s * s))
    assert gauss.admissible and gauss.l1_norm == pytest.approx(math.sqrt(math.pi), rel=1e-6)


def test_admissibility_rejects_growth():
    s = np.linspace(-50, 50, 1001)
    with pytest.raises(TailUnbounded):
        fourier_potential_admissible(s, 1 + s * s)
    with pytest.raises(ValueError):
        fourier_potential_admissible(s[:5], s[:5])
