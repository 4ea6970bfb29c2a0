"""Configuration- and phase-space real-time lattices."""

import warnings

import numpy as np
import pytest

from pathint.errors import DistributionalKernel, GridTruncationWarning, UnsupportedSymbol
from pathint.harness.convergence import convergence_table
from pathint.numerics.lattice import TimeLattice
from pathint.oracles.closed_form import free_propagator, harmonic_propagator, relativistic_closed_form
from pathint.oracles.symbols import HamiltonianSymbol
from pathint.realtime import (KernelMatrix, PotentialSpec, WavefunctionGrid, composition_check, free_kernel_fn,
                              free_wavepacket, grid_kernel_fn, lattice_chain_kernel, lattice_chain_quadratic,
                              lattice_grid_general, p_space_fourier_check, ps_lattice_p, ps_lattice_q,
                              relativistic_composition_residual, smeared_p_element)


def lat(N, T=1.0):
    return TimeLattice.from_duration(T, N)


@pytest.mark.parametrize("m,hbar", [(1.0, 1.0), (2.5, 0.3)])
def test_free_lattice_exact_for_all_N(m, hbar):
    ref = free_propagator(0.9, -0.4, 1.3, m, hbar).value
    for N in (0, 1, 5, 50, 500):
        v = lattice_chain_quadratic(PotentialSpec.zero(), lat(N, 1.3), 0.9, -0.4, m, hbar).value
        assert abs(v - ref) / abs(ref) < 1e-12


def test_harmonic_lattice_first_order():
    V = PotentialSpec.quadratic(0.5)
    ref = harmonic_propagator(0.4, -0.3, 1.0).value
    Ns = [8, 16, 32, 64, 128]
    errs = [abs(lattice_chain_quadratic(V, lat(N), 0.4, -0.3).value - ref) / abs(ref) for N in Ns]
    fit = convergence_table(Ns, errs)
    assert 0.9 <= fit.order <= 1.1
    assert errs[-1] < 2e-4


def test_linear_and_constant_potentials():
    # constant V only contributes a phase
    ref = free_propagator(0.2, 0.1, 1.0).value * np.exp(-0.7j)
    v = lattice_chain_quadratic(PotentialSpec.constant(0.7), lat(9), 0.2, 0.1).value
    assert abs(v - ref) < 1e-13
    # linear V: lattice error vanishes like eps
    V = PotentialSpec.linear(0.5)
    vals = [lattice_chain_quadratic(V, lat(N), 0.2, 0.1).value for N in (50, 100, 200)]
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    assert 0.4 < d2 / d1 < 0.6


def test_damping_factor_vanishes_in_the_limit():
    ref = free_propagator(0.4, -0.3, 1.0).value
    errs = [abs(lattice_chain_quadratic(PotentialSpec.zero(), lat(N), 0.4, -0.3, damping=1.0).value - ref)
            for N in (16, 32, 64)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] / errs[1] == pytest.approx(0.5, abs=0.05)


def test_chain_rejects_tabulated_potential():
    V = PotentialSpec.tabulated([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(UnsupportedSymbol):
        lattice_chain_kernel(V, lat(3))


def test_potential_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec.quadratic(0.5, lower_bound=1.0)
    with pytest.raises(ValueError):
        PotentialSpec.tabulated([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        PotentialSpec("cubic")
    V = PotentialSpec.quadratic(1.0, -2.0, 3.0)
    assert V.minimum() == pytest.approx(2.0)
    assert V(1.0) == pytest.approx(2.0)
    T = PotentialSpec.tabulated([0.0, 1.0], [1.0, 3.0])
    assert T(0.5) == pytest.approx(2.0) and T(5.0) == pytest.approx(3.0)


def test_grid_lattice_composes_exactly_and_warns():
    grid = WavefunctionGrid(-4.0, 4.0, 161)
    fn = grid_kernel_fn(PotentialSpec.quadratic(0.5), grid, 0.25)
    # the middle grid sum is the same trapezoid rule the kernel itself uses
    res = composition_check(fn, 0.0, 0.5, 1.0, [(0.4, -0.2), (1.0, 1.0)], quadrature=(grid.x, grid.weights))
    assert res < 1e-12
    with pytest.warns(GridTruncationWarning):
        lattice_grid_general(PotentialSpec.zero(), lat(2), grid)
    with pytest.raises(ValueError):
        lattice_grid_general(PotentialSpec.zero(), lat(2), grid, damping=-1)


def test_grid_link_matches_chain_at_N0():
    grid = WavefunctionGrid(-3.0, 3.0, 61)
    V = PotentialSpec.quadratic(0.5, 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTruncationWarning)
        km = lattice_grid_general(V, lat(0, 0.2), grid)
    x = grid.x
    ref = lattice_chain_kernel(V, lat(0, 0.2))(x[:, None], x[None, :])
    assert np.allclose(km.matrix, ref, rtol=1e-13)


def test_wavefunction_grid_and_kernel_matrix():
    g = WavefunctionGrid(-10.0, 10.0, 2001)
    psi = free_wavepacket(g, 0.5, 1.2, 0.3)
    assert psi.norm == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        WavefunctionGrid(1.0, 0.0, 5)
    with pytest.raises(ValueError):
        KernelMatrix(np.eye(3), WavefunctionGrid(0.0, 1.0, 4))
    km = KernelMatrix(np.eye(g.n_points) / g.dx, g)
    out = km.apply(psi)
    assert np.allclose(out.values[1:-1], psi.values[1:-1])


# -- phase-space lattices ------------------------------------------------------


def test_ps_free_collapses():
    H = HamiltonianSymbol.free()
    ref = free_propagator(0.7, 0.1, 1.0).value
    for N in (0, 3, 40):
        v = ps_lattice_q(H, lat(N), 0.7, 0.1)
        assert abs(v.value - ref) < 1e-14
        assert v.meta["collapsed"]


def test_ps_relativistic_N_independent():
    H = HamiltonianSymbol.relativistic(1.0)
    vals = [ps_lattice_q(H, lat(N), 0.3, 0.0).value for N in (0, 1, 7, 64)]
    assert max(abs(v - vals[0]) for v in vals) == 0.0
    assert abs(vals[0] - relativistic_closed_form(0.3, 1.0)) / abs(vals[0]) < 1e-9


def test_ps_harmonic_midpoint_converges():
    H = HamiltonianSymbol.harmonic()
    ref = harmonic_propagator(0.4, -0.3, 1.0).value
    Ns = [16, 32, 64, 128]
    errs = [abs(ps_lattice_q(H, lat(N), 0.4, -0.3).value - ref) / abs(ref) for N in Ns]
    fit = convergence_table(Ns, errs)
    assert 0.9 <= fit.order <= 1.1


def test_ps_q_rejects_nonseparable():
    H = HamiltonianSymbol.polynomial({(2, 0): 0.5, (1, 1): 0.1})
    with pytest.raises(UnsupportedSymbol):
        ps_lattice_q(H, lat(4), 0.0, 0.0)


def test_ps_p_distributional_for_free():
    with pytest.raises(DistributionalKernel) as info:
        ps_lattice_p(HamiltonianSymbol.free(), lat(4), 0.1, 0.2)
    assert info.value.shift == 0.0
    # the weight is the free phase e^{-i T p^2/2}
    assert abs(info.value.weight(0.8) - np.exp(-0.32j)) < 1e-14


def test_ps_p_position_only_closed_form():
    H = HamiltonianSymbol.polynomial({(0, 2): 0.5})
    # mirror of the free particle with the roles of p and q exchanged
    v = ps_lattice_p(H, lat(6), 0.7, 0.1).value
    assert abs(v - free_propagator(0.7, 0.1, 1.0).value) < 1e-14


@pytest.mark.parametrize("H", [HamiltonianSymbol.harmonic(), HamiltonianSymbol.free(),
                               HamiltonianSymbol.polynomial({(2, 0): 0.5, (0, 2): 0.3, (0, 1): 0.2})])
def test_p_space_matches_fourier_of_q_space(H):
    err, direct, _ = p_space_fourier_check(H, lat(4))
    assert err < 1e-10 * abs(direct)


def test_smeared_element_shape():
    H = HamiltonianSymbol.harmonic()
    p = np.linspace(-8, 8, 201)
    v = smeared_p_element(H, lat(2), lambda x: np.exp(-x * x), lambda x: np.exp(-x * x), p)
    assert np.isfinite(v)


def test_composition_residuals():
    assert composition_check(free_kernel_fn(), 0.0, 0.4, 1.0, [(0.1, 0.2), (1.0, -1.0)]) < 1e-14
    assert relativistic_composition_residual() < 1e-8
    with pytest.raises(ValueError):
        composition_check(free_kernel_fn(), 0.0, 0.4, 1.0, [(0.0, 0.0)], quadrature="simpson")
