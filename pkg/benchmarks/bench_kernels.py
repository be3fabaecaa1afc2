"""Benchmark the compiled Chebyshev kernel against the numpy fallback.

Runs the same expansion (identical coefficients and state) through both
backends over a range of lattice sizes, checks that results agree to
near machine precision, and reports wall time plus speedup.

Usage: python3 benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ctqwalk.kernels import available_backends
from ctqwalk.model import SiteGrid, build_homogeneous
from ctqwalk.propagator import ChebyshevEngine, PropagatorConfig
from ctqwalk.states import gaussian_state


def bench(half_width: int, t: float, repeats: int) -> dict:
    grid = SiteGrid(half_width)
    h = build_homogeneous(grid, 1.0, 0.0)
    engine = ChebyshevEngine(h, PropagatorConfig())
    coeffs = engine._coefficients(t)
    psi = np.ascontiguousarray(gaussian_state(grid, 1.0).amp)
    results = {}
    timings = {}
    for name, fn in available_backends().items():
        fn(engine.diag_scaled, engine.lower_scaled, coeffs, psi)  # warm-up
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = fn(engine.diag_scaled, engine.lower_scaled, coeffs, psi)
            best = min(best, time.perf_counter() - t0)
        results[name] = np.asarray(out)
        timings[name] = best
    return {"n_sites": grid.n_sites, "order": len(coeffs) - 1,
            "timings": timings, "results": results}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if len(backends) < 2:
        print("compiled extension not built; benchmarking the python kernel alone")
    print(f"{'N':>7} {'order':>6} " + " ".join(f"{n + ' [ms]':>15}" for n in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for half_width in (256, 1024, 4096):
        r = bench(half_width, 50.0, args.repeats)
        row = f"{r['n_sites']:>7} {r['order']:>6} "
        row += " ".join(f"{1e3 * r['timings'][n]:>15.3f}" for n in backends)
        if len(backends) > 1:
            err = float(np.max(np.abs(r["results"]["python"] - r["results"]["compiled"])))
            speedup = r["timings"]["python"] / r["timings"]["compiled"]
            row += f"   {speedup:>6.2f}x  (max |diff| {err:.2e})"
        print(row)


if __name__ == "__main__":
    main()
