"""Imaginary-time transfer matrices, bridge Monte Carlo and Cameron's diagnostic."""

import math
import warnings

import numpy as np
import pytest

from pathint.errors import GridTruncationWarning
from pathint.euclidean import (CameronSpec, apply_euclidean_propagator, cameron_absolute_value, cameron_bruteforce,
                               cameron_chain_value, cameron_closed_form, cameron_is_divergent,
                               cameron_variation_factor, fk_bridge_mc, fk_transfer_matrix)
from pathint.numerics.lattice import TimeLattice
from pathint.numerics.rng import RandomStream
from pathint.oracles.closed_form import euclidean_oscillator_kernel, heat_kernel
from pathint.realtime import PotentialSpec, WavefunctionGrid

GRID = WavefunctionGrid(-8.0, 8.0, 401)


def lat(N, T=1.0):
    return TimeLattice.from_duration(T, N)


def test_free_transfer_is_heat_kernel():
    W = fk_transfer_matrix(PotentialSpec.zero(), 1.0, lat(15), GRID, check=False)
    x = GRID.x
    core = slice(100, 301)
    ref = heat_kernel(x[core, None], x[None, core], 1.0)
    assert np.abs(W.matrix[core, core] - ref).max() < 1e-10


@pytest.mark.parametrize("x2,x1,ratio", [(0.48, -0.2, 0.5), (0.0, 0.0, 0.25)])
def test_transfer_converges_to_mehler(x2, x1, ratio):
    # left-point bias is eps (V(x1) - V(x2)) / 2 at leading order, so equal-V pins converge faster
    V = PotentialSpec.quadratic(0.5)
    ref = euclidean_oscillator_kernel(x2, x1, 1.0)
    errs = [abs(fk_transfer_matrix(V, 1.0, lat(N), GRID).at(x2, x1) - ref) for N in (31, 63, 127)]
    assert errs[1] / errs[0] == pytest.approx(ratio, rel=0.1)
    assert errs[2] / errs[1] == pytest.approx(ratio, rel=0.1)


def test_transfer_diffusion_constant():
    # V = c2 x^2 with diffusion nu maps to omega = sqrt(2 nu c2)
    V = PotentialSpec.quadratic(0.8)
    nu = 0.5
    W = fk_transfer_matrix(V, nu, lat(255), GRID)
    ref = euclidean_oscillator_kernel(0.48, -0.2, 1.0, nu=nu, omega=math.sqrt(2 * nu * 0.8))
    assert abs(W.at(0.48, -0.2) - ref) / ref < 5e-3


def test_transfer_positive_and_guarded():
    table = (np.linspace(-8, 8, 33), 2 + np.cos(np.linspace(-8, 8, 33)))
    for V in (PotentialSpec.zero(), PotentialSpec.quadratic(3.0, 1.0), PotentialSpec.tabulated(*table)):
        W = fk_transfer_matrix(V, 0.7, lat(20), GRID, check=False)
        assert W.matrix.min() > 0
    with pytest.raises(ValueError):
        fk_transfer_matrix(PotentialSpec.linear(1.0), 1.0, lat(3), GRID)
    with pytest.raises(ValueError):
        fk_transfer_matrix(PotentialSpec.zero(), 0.0, lat(3), GRID)
    with pytest.warns(GridTruncationWarning):
        fk_transfer_matrix(PotentialSpec.zero(), 1.0, lat(30), WavefunctionGrid(-8.0, 8.0, 41), check=False)


def test_apply_preserves_gaussian_family():
    rho = GRID.with_values(heat_kernel(GRID.x, 0.0, 0.5))
    W = fk_transfer_matrix(PotentialSpec.zero(), 1.0, lat(7), GRID, check=False)
    out = apply_euclidean_propagator(W, rho)
    assert np.all(out.values.imag == 0)
    assert np.allclose(out.values[150:251], heat_kernel(GRID.x[150:251], 0.0, 1.5), atol=1e-10)
    with pytest.raises(ValueError):
        apply_euclidean_propagator(W, WavefunctionGrid(-1.0, 1.0, 401))


def test_bridge_mc_free_is_exact(backend):
    est = fk_bridge_mc(PotentialSpec.zero(), 1.0, 1.0, 0.3, -0.1, 32, 500, RandomStream(5))
    assert est.value.value == pytest.approx(heat_kernel(0.3, -0.1, 1.0), abs=1e-15)
    assert est.stderr == 0.0


def test_bridge_mc_oscillator(backend):
    V = PotentialSpec.quadratic(0.5)
    est = fk_bridge_mc(V, 1.0, 1.0, 0.0, 0.0, 128, 40_000, RandomStream(11))
    # lattice bias at 128 steps is ~1e-5, far below the statistical error
    assert est.within(euclidean_oscillator_kernel(0.0, 0.0, 1.0), n_sigma=4)
    assert est.params["backend"] == backend


def test_bridge_mc_reproducible_and_backend_independent():
    from pathint import kernels

    V = PotentialSpec.quadratic(0.5, 0.2, 0.1)
    vals = []
    for name in ("numba", "numpy", "numba"):
        kernels.use(name)
        try:
            vals.append(fk_bridge_mc(V, 1.0, 1.0, 0.2, 0.4, 64, 3000, RandomStream(3, 2)).value.value)
        finally:
            kernels.use(None)
    assert vals[0] == vals[2]
    assert abs(vals[0] - vals[1]) < 1e-13 * abs(vals[0])


def test_bridge_mc_guards():
    with pytest.raises(ValueError):
        fk_bridge_mc(PotentialSpec.zero(), 1.0, 1.0, 0.0, 0.0, 8, 10, RandomStream(1))
    with pytest.raises(ValueError):
        fk_bridge_mc(PotentialSpec.linear(1.0), 1.0, 1.0, 0.0, 0.0, 8, 1000, RandomStream(1))


# -- Cameron ------------------------------------------------------------------


def test_cameron_chain_closed_form():
    for lam in (1 + 1j, 2.0 - 0.5j, 0.7):
        spec = CameronSpec(lam, 0.05, 9)
        assert abs(cameron_chain_value(spec, 0.3, -0.2).value - cameron_closed_form(spec, 0.3, -0.2)) < 1e-13
    assert CameronSpec(1 + 1j, 0.1, 4).duration == pytest.approx(0.5)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_cameron_bruteforce_matches_chain(N):
    spec = CameronSpec(1 + 1j, 0.1, N)
    brute = cameron_bruteforce(spec, 0.2, -0.1, n_nodes=40 if N == 3 else 80)
    chain = cameron_chain_value(spec, 0.2, -0.1).value
    assert abs(brute - chain) / abs(chain) < 1e-8


def test_cameron_absolute_value_grows():
    spec = CameronSpec(1 + 1j, 0.1, 2)
    brute = cameron_bruteforce(spec, 0.0, 0.0, absolute=True)
    assert abs(brute - cameron_absolute_value(spec, 0.0, 0.0)) / brute.real < 1e-10
    mass = [cameron_absolute_value(CameronSpec(1 + 1j, 1.0 / (N + 1), N), 0.0, 0.0) for N in (4, 16, 64)]
    assert mass[0] < mass[1] < mass[2]
    assert mass[2] / mass[0] == pytest.approx(2 ** 15, rel=1e-12)


def test_cameron_factor_properties():
    assert all(cameron_variation_factor(1 + 1j, N) == 2 ** (N / 4) for N in range(0, 65, 4))
    assert cameron_variation_factor(0.5, 40) == 1.0
    assert cameron_is_divergent(1 + 1e-9j) and not cameron_is_divergent(3.0)
    with pytest.raises(ValueError):
        cameron_variation_factor(-1 + 1j, 3)
    with pytest.raises(ValueError):
        CameronSpec(1 + 1j, 0.1, 0)
    with pytest.raises(ValueError):
        cameron_bruteforce(CameronSpec(1 + 1j, 0.1, 4), 0, 0)


def test_cameron_sigma():
    s = CameronSpec.sigma_from(2.0, m=1.0, hbar=1.0)
    assert abs(1 / s - (0.5 - 1j)) < 1e-15


def test_kernel_matrix_lookup_is_nearest_node():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        W = fk_transfer_matrix(PotentialSpec.zero(), 1.0, lat(3), GRID)
    assert W.at(0.01, 0.0) == W.matrix[200, 200]
