"""Closed forms, Fock-space oracles and symbol calculus."""

import cmath
import math

import numpy as np
import pytest

from pathint.errors import ExtrapolationFailed, TruncationInsufficient
from pathint.oracles.closed_form import (damped_momentum_integral, euclidean_oscillator_kernel, free_kernel,
                                         free_propagator, harmonic_propagator, heat_gaussian_kernel, heat_kernel,
                                         relativistic_closed_form, relativistic_contour,
                                         relativistic_free_propagator, relativistic_semigroup_kernel)
from pathint.oracles.fock import (FockSpace, OperatorMatrix, StateVector, antinormal_operator, antinormal_quantize,
                                  coherent_vector, cs_matrix_element, fiducial_vector, matrix_propagator,
                                  normal_operator, number_rotation_element, number_state, weyl_operator)
from pathint.oracles.symbols import (HamiltonianSymbol, antinormal_from_weyl, binomial_alpha_expansion, heat_flow,
                                     laplacian, weyl_from_antinormal)

# frozen from mpmath at 30 digits
MEHLER_00 = 0.368005198707560812
FREE_06 = 0.328040491892032546 - 0.227033871418184351j
REL_TIMELIKE_03 = -0.222620544059718210 - 0.430971037321168228j
REL_SPACELIKE_2 = 0.0368174553213197181j


def test_free_propagator_frozen():
    assert abs(free_propagator(0.6, 0.0, 1.0).value - FREE_06) < 1e-15
    k = free_kernel(1.0)
    assert abs(k(0.6, 0.0) - FREE_06) < 1e-15


def test_free_propagator_scaling():
    # K(x, T; m, hbar) depends on m / hbar and (x2 - x1) only
    a = free_propagator(1.1, 0.3, 0.7, m=2.0, hbar=0.5).value
    b = free_propagator(0.8, 0.0, 0.7, m=4.0, hbar=1.0).value
    assert abs(a - b) < 1e-14
    with pytest.raises(ValueError):
        free_propagator(0.0, 0.0, 0.0)


def test_harmonic_reduces_to_free():
    for x2, x1 in ((0.3, -0.4), (1.0, 1.0)):
        h = harmonic_propagator(x2, x1, 1.0, omega=1e-5).value
        f = free_propagator(x2, x1, 1.0).value
        assert abs(h - f) / abs(f) < 1e-9
    with pytest.raises(ValueError):
        harmonic_propagator(0, 0, 4.0)


def test_harmonic_semigroup():
    # int K(x2, y; T2) K(y, x1; T1) dy = K(x2, x1; T1 + T2), oscillating integral done via the kernels
    from pathint.numerics.gaussian import GaussianKernel, compose_gaussian

    def kern(T):
        s, c = math.sin(T), math.cos(T)
        g = 1j / (2 * s)
        return GaussianKernel.from_coefficients(cmath.sqrt(1 / (2j * math.pi * s)), g * c, -2 * g, g * c)

    k = compose_gaussian(kern(0.7), kern(0.9))
    assert abs(k(0.4, -0.2) - harmonic_propagator(0.4, -0.2, 1.6).value) < 1e-13


def test_heat_kernel_forms_agree():
    x = np.linspace(-2, 2, 7)
    assert np.allclose(heat_kernel(x, 0.3, 0.8, nu=1.5), heat_gaussian_kernel(0.8, 1.5)(x, 0.3), rtol=1e-14)
    assert abs(heat_kernel(0.0, 0.0, 1.0) - 1 / math.sqrt(2 * math.pi)) < 1e-16


def test_mehler_frozen_and_limits():
    assert abs(euclidean_oscillator_kernel(0.0, 0.0, 1.0) - MEHLER_00) < 1e-15
    x = np.linspace(-1, 1, 5)
    small = euclidean_oscillator_kernel(x, 0.2, 1.0, omega=1e-6)
    assert np.allclose(small, heat_kernel(x, 0.2, 1.0), rtol=1e-10)
    assert euclidean_oscillator_kernel(0.5, 0.1, 1.0, omega=0) == heat_kernel(0.5, 0.1, 1.0)


def test_mehler_semigroup_by_quadrature():
    y, w = np.polynomial.hermite.hermgauss(80)
    # int K(x, y; .6) K(y, z; .4) dy with the Gaussian weight divided out
    f = euclidean_oscillator_kernel(0.3, y, 0.6) * euclidean_oscillator_kernel(y, -0.1, 0.4) * np.exp(y * y)
    assert abs(np.sum(w * f) - euclidean_oscillator_kernel(0.3, -0.1, 1.0)) < 1e-12


def test_relativistic_closed_form_frozen():
    assert abs(relativistic_closed_form(0.3, 1.0) - REL_TIMELIKE_03) < 1e-14
    assert abs(relativistic_closed_form(-2.0, 1.0) - REL_SPACELIKE_2) < 1e-15
    with pytest.raises(ValueError):
        relativistic_closed_form(1.0, 1.0)


@pytest.mark.parametrize("dq", [0.0, 0.3, 0.8, 1.5, 3.0])
def test_relativistic_contour_matches_closed_form(dq):
    a = relativistic_contour(dq, 1.0)
    b = relativistic_closed_form(dq, 1.0)
    assert abs(a - b) / abs(b) < 1e-9


def test_relativistic_damped_oracle():
    v = relativistic_free_propagator(0.3, 1.0)
    assert abs(v.value - REL_TIMELIKE_03) / abs(REL_TIMELIKE_03) < 1e-5
    assert v.meta["error_bound"] < 1e-4 * abs(v.value)
    with pytest.raises(ExtrapolationFailed):
        relativistic_free_propagator(0.97, 1.0)


def test_damped_integral_self_convergence():
    base = damped_momentum_integral(0.3, 1.0, 0.05)
    for kw in ({"p_factor": 1.5}, {"step_factor": 0.5}):
        assert abs(damped_momentum_integral(0.3, 1.0, 0.05, **kw) - base) < 1e-12


def test_semigroup_kernel_matches_damped_integral():
    # cosine transform of exp(-(delta + i) T sqrt(p^2 + 1)), done directly
    from scipy import integrate

    d, T, dq = 0.2, 0.8, 0.5
    f = lambda p, part: (np.exp(-(d + 1j) * T * np.sqrt(p * p + 1)) * np.cos(p * dq) / np.pi).real if part == 0 \
        else (np.exp(-(d + 1j) * T * np.sqrt(p * p + 1)) * np.cos(p * dq) / np.pi).imag  # noqa: E731
    ref = sum(c * integrate.quad(f, 0, 400, args=(k,), limit=2000, epsabs=1e-13)[0] for k, c in ((0, 1), (1, 1j)))
    assert abs(relativistic_semigroup_kernel(dq, T, d) - ref) < 1e-9


# -- Fock space ----------------------------------------------------------------


def test_fock_ladder_and_canonical_pair():
    sp = FockSpace(30)
    comm = sp.Q @ sp.P - sp.P @ sp.Q
    assert np.allclose(comm[:29, :29], 1j * np.eye(29))
    assert np.allclose(sp.adag @ sp.a, sp.number)


def test_fiducial_is_vacuum():
    sp = FockSpace(40)
    v = fiducial_vector(sp)
    assert abs(abs(v.components[0]) - 1) < 1e-12


def test_coherent_overlap_closed_form():
    sp = FockSpace(80)
    a = coherent_vector(0.4, -0.7, sp)
    b = coherent_vector(-0.3, 1.1, sp)
    # <p2 q2|p1 q1> = exp{i(p1+p2)(q2-q1)/2 - [(p2-p1)^2 + (q2-q1)^2]/4}
    p2, q2, p1, q1 = 0.4, -0.7, -0.3, 1.1
    ref = cmath.exp(0.5j * (p1 + p2) * (q2 - q1) - 0.25 * ((p2 - p1) ** 2 + (q2 - q1) ** 2))
    assert abs(a.inner(b) - ref) < 1e-13


def test_coherent_vector_operator_route():
    sp = FockSpace(80)
    a = coherent_vector(0.9, 0.5, sp)
    b = coherent_vector(0.9, 0.5, sp, method="operator")
    assert abs(a.inner(b) - 1) < 1e-10


def test_weyl_orderings_agree_on_trusted_block():
    sp = FockSpace(80)
    u1 = weyl_operator(0.6, -0.4, sp).block(sp.trusted)
    u2 = weyl_operator(0.6, -0.4, sp, ordering="product").block(sp.trusted)
    assert np.abs(u1 - u2).max() < 1e-10
    with pytest.raises(TruncationInsufficient):
        weyl_operator(8.0, 8.0, FockSpace(40))


def test_truncation_guard_on_coherent_vector():
    with pytest.raises(TruncationInsufficient):
        coherent_vector(6.0, 6.0, FockSpace(20))


def test_number_rotation_element_against_matrix():
    sp = FockSpace(90)
    U = matrix_propagator(OperatorMatrix(sp.number + 0.5 * np.eye(sp.dim), hermitian=True), 0.8)
    pins = (0.3, 0.5, -0.2, 0.1)
    a = cs_matrix_element(U, *pins, sp)
    b = number_rotation_element(*pins, theta=0.8, shift=0.5)
    assert abs(a - b) < 1e-12


def test_state_vector_basics():
    sp = FockSpace(10)
    n3 = number_state(3, sp)
    assert n3.expectation(sp.number) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        StateVector([1.0, np.nan])
    with pytest.raises(ValueError):
        OperatorMatrix([[0, 1], [0, 0]], hermitian=True)


# -- orderings and symbols ----------------------------------------------------


def test_quadrature_and_algebraic_antinormal_agree():
    sp = FockSpace(60)
    H = HamiltonianSymbol.polynomial({(2, 0): 0.5, (0, 2): 0.5, (0, 1): -0.3, (1, 1): 0.2})
    a = antinormal_quantize(H, sp).block(16)
    b = antinormal_operator(H, sp).block(16)
    assert np.abs(a - b).max() < 1e-7


def test_normal_and_antinormal_harmonic_spectra():
    sp = FockSpace(40)
    H = HamiltonianSymbol.harmonic()
    n = np.arange(10)
    assert np.allclose(np.diag(normal_operator(H, sp).block(10)).real, n)
    assert np.allclose(np.diag(antinormal_operator(H, sp).block(10)).real, n + 1)


def test_quartic_antinormal_shift():
    # vacuum Husimi density is a unit-variance Gaussian in q, so <0|q^4 antinormal|0> = 3
    sp = FockSpace(40)
    H = HamiltonianSymbol.polynomial({(0, 4): 1.0})
    assert antinormal_operator(H, sp).matrix[0, 0].real == pytest.approx(3.0, abs=1e-12)
    assert normal_operator(H, sp).matrix[0, 0].real == pytest.approx(0.0, abs=1e-12)


def test_laplacian_and_heat_flow_round_trip():
    c = {(4, 0): 1.0, (2, 2): -0.5, (0, 3): 2.0, (1, 0): 1.0}
    assert laplacian({(2, 0): 1.0, (0, 2): 1.0}) == {(0, 0): 4.0}
    back = heat_flow(heat_flow(c, 0.3), -0.3)
    assert all(abs(back.get(k, 0) - c.get(k, 0)) < 1e-14 for k in set(back) | set(c))


def test_weyl_antinormal_maps_exact():
    weyl = HamiltonianSymbol.harmonic(shift=0.5, ordering="weyl")
    assert antinormal_from_weyl(weyl).coeffs == {(2, 0): 0.5, (0, 2): 0.5}
    back = weyl_from_antinormal(HamiltonianSymbol.harmonic())
    assert back.coeffs == {(2, 0): 0.5, (0, 2): 0.5, (0, 0): 0.5}
    assert back.ordering == "weyl"


def test_binomial_alpha_expansion_pointwise():
    c = {(2, 0): 0.5, (1, 1): -0.2, (0, 3): 0.7, (0, 0): 1.0}
    exp = binomial_alpha_expansion(c)
    rng = np.random.default_rng(3)
    for p, q in rng.normal(size=(5, 2)):
        al = (q + 1j * p) / math.sqrt(2)
        lhs = sum(v * p**i * q**j for (i, j), v in c.items())
        rhs = sum(v * al**j * np.conj(al) ** k for (j, k), v in exp.items())
        assert abs(lhs - rhs) < 1e-12


def test_symbol_parts_and_tags():
    H = HamiltonianSymbol.separable(2.0, (0.0, 0.1, 0.3))
    assert H.quadratic_parts() == (0.25, 0.0, 0.3, 0.0, 0.1, 0.0)
    assert H.momentum_part(2.0) == pytest.approx(1.0)
    assert H.position_part(1.0) == pytest.approx(0.4)
    assert "separable" in H.tags and "quadratic" in H.tags
    rel = HamiltonianSymbol.relativistic(1.0)
    assert not rel.is_polynomial
    assert rel.momentum_part(0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rel.degree
