#!/usr/bin/env python3
"""Benchmark the stepping kernels (compiled vs NumPy) on the relaxation
problem the solver runs in production.

    python benchmarks/bench_step.py [--nx 128] [--nv 128] [--steps 2000]
"""

import argparse
import time

import numpy as np

from fpkin import backends
from fpkin import kinetics as kin


def time_backend(backend, config, steps, repeats=3):
    grid = config.grid()
    initial, _spec = kin.make_initial_field(config, grid)
    dt = kin.cfl_limit(initial, grid)
    stepper = kin._Stepper(grid, config.k, dt, config.boundary,
                           backend=backend)
    best = np.inf
    final = None
    for _ in range(repeats):
        values = initial.values.copy()
        t0 = time.perf_counter()
        for _ in range(steps):
            values, _clamp = stepper.advance(values)
        best = min(best, time.perf_counter() - t0)
        final = values
    return best, final


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nx", type=int, default=128)
    parser.add_argument("--nv", type=int, default=128)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--k", type=float, default=-0.5)
    args = parser.parse_args()

    config = kin.SimulationConfig(x_nodes=args.nx, v_nodes=args.nv, k=args.k)
    names = backends.available_backends()
    print(f"grid {args.nx}x{args.nv}, k={args.k}, {args.steps} steps, "
          f"best of 3")
    results = {}
    fields = {}
    for name in names:
        seconds, final = time_backend(backends.get_backend(name), config,
                                      args.steps)
        results[name] = seconds
        fields[name] = final
        rate = args.steps / seconds
        print(f"  {name:8s} {seconds:8.3f} s   {rate:9.1f} steps/s")
    if "cython" in results and "numpy" in results:
        print(f"  speedup  {results['numpy'] / results['cython']:.2f}x")
        drift = np.abs(fields["numpy"] - fields["cython"]).max()
        print(f"  max |field difference| between backends: {drift:.3e}")
    elif "cython" not in results:
        print("  compiled kernel not available; only the NumPy fallback ran")


if __name__ == "__main__":
    main()
