import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathint.errors import CompositionDiverges
from pathint.numerics.gaussian import GaussianKernel, compose_chain, compose_gaussian, compose_power
from pathint.oracles.closed_form import free_kernel, free_propagator, heat_gaussian_kernel, heat_kernel

times = st.floats(0.05, 3.0)


@settings(max_examples=40, deadline=None)
@given(times, times, st.floats(-2, 2), st.floats(-2, 2))
def test_heat_semigroup(t1, t2, x, y):
    k = compose_gaussian(heat_gaussian_kernel(t2), heat_gaussian_kernel(t1))
    assert k(x, y).real == pytest.approx(heat_kernel(x, y, t1 + t2), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(times, times, st.floats(-2, 2), st.floats(-2, 2))
def test_free_semigroup_fresnel(t1, t2, x, y):
    # oscillatory composition variable, evaluated with the i0+ prescription
    k = compose_gaussian(free_kernel(t2), free_kernel(t1))
    assert abs(k(x, y) - free_propagator(x, y, t1 + t2).value) <= 1e-11 * abs(k(x, y))


def test_compose_power_matches_chain():
    step = heat_gaussian_kernel(0.1, nu=0.7)
    a = compose_power(step, 13)
    b = compose_chain([step] * 13)
    for x, y in ((0.0, 0.0), (0.4, -1.1)):
        assert a(x, y) == pytest.approx(b(x, y), rel=1e-12)
    assert a(0.3, 0.2).real == pytest.approx(heat_kernel(0.3, 0.2, 1.3, 0.7), rel=1e-12)


def test_growing_direction_diverges():
    grow = GaussianKernel.from_coefficients(1.0, 1.0, 0.0, 0.0)  # exp(+x_out^2), beats the heat step
    with pytest.raises(CompositionDiverges):
        compose_gaussian(heat_gaussian_kernel(1.0), grow)


def test_kernel_evaluation_broadcasts():
    k = heat_gaussian_kernel(0.5)
    x = np.linspace(-1, 1, 7)
    out = k(x[:, None], x[None, :])
    assert out.shape == (7, 7)
    assert np.allclose(out.real, heat_kernel(x[:, None], x[None, :], 0.5))


def test_two_dimensional_kernel():
    # product of two heat kernels as one 2-D kernel
    c = -1 / (2 * 0.3)
    quad = np.zeros((4, 4))
    for a, b in ((0, 2), (1, 3)):
        quad[a, a] = quad[b, b] = c
        quad[a, b] = quad[b, a] = -c
    k = GaussianKernel.from_quadratic(quad, prefactor=1 / (2 * math.pi * 0.3))
    k2 = compose_gaussian(k, k)
    val = k2(np.array([0.2, -0.1]), np.array([0.0, 0.3]))
    assert val.real == pytest.approx(heat_kernel(0.2, 0.0, 0.6) * heat_kernel(-0.1, 0.3, 0.6), rel=1e-12)


def test_scaled_and_prefactor():
    k = heat_gaussian_kernel(1.0).scaled(2.0)
    assert k.prefactor == pytest.approx(2 / math.sqrt(2 * math.pi))
    assert cmath.isclose(k(0.0, 0.0), 2 / math.sqrt(2 * math.pi))
