"""Time the numba kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--paths 20000] [--nodes 257] [--repeat 5]

Each kernel is called once before timing so numba compilation is excluded.
Both backends see the same inputs and their outputs are compared.
"""

import argparse
import time

import numpy as np

from pathint import _kernels_numba as knb
from pathint import _kernels_numpy as knp
from pathint.numerics.bridge import bridge_plan
from pathint.numerics.lattice import TimeLattice


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n_paths, n_nodes, rng):
    lat = TimeLattice.from_duration(1.0, n_nodes - 2)
    plan = bridge_plan(1.0, lat)
    z = rng.normal(size=(n_paths, plan[0].shape[0]))
    paths = rng.normal(size=(n_paths, n_nodes))
    p, q = rng.normal(size=(2, n_paths, n_nodes))
    poly = np.array([0.0, 0.1, 0.5])
    coeffs = np.array([[0.0, 0.0, 0.5], [0.0, 0.2, 0.0], [0.5, 0.0, 0.0]])
    tx = np.linspace(-4, 4, 65)
    tv = 2 + np.cos(tx)
    return {
        "bridge_fill": lambda k, out: k.bridge_fill(z, 0.0, 0.0, *plan, out),
        "potential_action (poly)": lambda k, out: k.potential_action(paths, lat.eps, k.POLY, poly, tx, tv, out),
        "potential_action (table)": lambda k, out: k.potential_action(paths, lat.eps, k.TABLE, poly, tx, tv, out),
        "phase_action": lambda k, out: k.phase_action(p, q, lat.eps, coeffs, False, out),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=20000)
    ap.add_argument("--nodes", type=int, default=257)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}{'max diff':>11}")
    for name, call in cases(args.paths, args.nodes, rng).items():
        shape = (args.paths, args.nodes) if name == "bridge_fill" else (args.paths,)
        out_np, out_nb = np.empty(shape), np.empty(shape)
        t_np = best_of(lambda: call(knp, out_np), args.repeat)
        t_nb = best_of(lambda: call(knb, out_nb), args.repeat)
        diff = float(np.max(np.abs(out_np - out_nb)))
        print(f"{name:<26}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
