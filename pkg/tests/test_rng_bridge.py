import math

import numpy as np
import pytest

from pathint import kernels
from pathint.numerics.bridge import bridge_blocks, sample_bridges, sample_brownian_bridge
from pathint.numerics.estimate import PropagatorEstimate, mean_and_stderr
from pathint.numerics.amplitude import ComplexAmplitude
from pathint.numerics.lattice import PhasePath, TimeLattice
from pathint.numerics.rng import RandomStream, block_streams


def test_stream_is_pure_function_of_key():
    a = RandomStream(7, 3).normal(10)
    b = RandomStream(7, 3).normal(10)
    c = RandomStream(7, 4).normal(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_substreams_are_disjoint_and_stable():
    s = RandomStream(11)
    blocks = list(block_streams(s, 10_000, 4096))
    assert [(b[0], b[1]) for b in blocks] == [(0, 4096), (4096, 8192), (8192, 10_000)]
    first = blocks[1][2].normal(5)
    assert np.array_equal(first, s.substream(1).normal(5))
    assert not np.array_equal(first, s.normal(5))


def test_seed_range_checked():
    with pytest.raises(ValueError):
        RandomStream(-1)
    with pytest.raises(ValueError):
        RandomStream(2**64)


def test_bridge_pinned_and_variance(backend):
    lat = TimeLattice(0.0, 2.0, 15)
    paths = sample_bridges(0.8, lat, 0.5, -1.0, 40_000, RandomStream(5))
    assert np.all(paths[:, 0] == 0.5) and np.all(paths[:, -1] == -1.0)
    t = lat.times
    mean = 0.5 + (t / 2.0) * (-1.5)
    var = 0.8 * t * (2.0 - t) / 2.0
    assert np.allclose(paths.mean(axis=0), mean, atol=0.02)
    assert np.allclose(paths.var(axis=0)[1:-1], var[1:-1], rtol=0.04)


def test_bridge_covariance():
    lat = TimeLattice(0.0, 1.0, 7)
    paths = sample_bridges(1.0, lat, 0.0, 0.0, 60_000, RandomStream(9))
    t = lat.times
    c = np.cov(paths[:, 1:-1].T)
    exact = np.minimum.outer(t, t) - np.outer(t, t)
    assert np.allclose(c, exact[1:-1, 1:-1], atol=0.01)


def test_backends_agree_bitwise():
    lat = TimeLattice(0.0, 1.0, 31)
    out = {}
    for name in ("numba", "numpy"):
        kernels.use(name)
        out[name] = sample_bridges(1.3, lat, 0.1, 0.2, 5000, RandomStream(3), block_size=1024)
    kernels.use(None)
    assert np.allclose(out["numba"], out["numpy"], rtol=0, atol=1e-13)


def test_blocks_independent_of_block_iteration():
    lat = TimeLattice(0.0, 1.0, 9)
    whole = sample_bridges(1.0, lat, 0.0, 0.0, 3000, RandomStream(2), block_size=1000)
    parts = [p for _, _, p in bridge_blocks(1.0, lat, 0.0, 0.0, 3000, RandomStream(2), 1000)]
    assert np.array_equal(whole, np.vstack(parts))


def test_single_bridge_sample():
    s = sample_brownian_bridge(1.0, TimeLattice(0.0, 1.0, 4), 1.0, 2.0, RandomStream(1))
    assert s.values[0] == 1.0 and s.values[-1] == 2.0 and s.values.shape == (6,)


def test_mean_and_stderr_is_order_independent(rng):
    x = rng.normal(size=1001) + 1j * rng.normal(size=1001)
    m1, s1 = mean_and_stderr(x)
    m2, s2 = mean_and_stderr(x[::-1].copy())
    assert m1 == m2 and s1 == s2
    assert s1 == pytest.approx(math.sqrt(np.var(x, ddof=1) / x.size), rel=1e-12)


def test_estimate_within():
    e = PropagatorEstimate(ComplexAmplitude(1.0 + 0.01j), 0.01, "t")
    assert e.within(1.0, 3.0)
    assert not e.within(1.05, 3.0)
    with pytest.raises(ValueError):
        PropagatorEstimate(ComplexAmplitude(1.0), -1.0, "t")


def test_lattice_and_phase_path():
    lat = TimeLattice.from_duration(2.0, 3)
    assert lat.eps == 0.5 and lat.n_links == 4 and np.allclose(lat.times, [0, 0.5, 1, 1.5, 2])
    path = PhasePath.from_arrays(np.arange(5.0), np.ones(5), lat)
    assert np.array_equal(path.p, np.arange(5.0))
    with pytest.raises(ValueError):
        TimeLattice(1.0, 1.0, 2)
