"""Compare the compiled and numpy NWF kernels on the same factor matrices.

    python3 benchmarks/bench_nwf.py [--nodes 48 64 96] [--repeat 3]

Prints one row per (case, backend) with the best wall time and checks that
both backends return identical row sums.
"""

import argparse
import time

import numpy as np

from cohpol.phasespace import BACKENDS, PhaseGrid, principal_frame
from cohpol.phasespace.negativity import _terms_2d, _terms_4d
from cohpol.states import make_psi1, superposition


def cases(nodes_list):
    three = superposition((1, 0.7 + 0.2j, -0.3), (0.5j, -0.4, 0.6j), (-0.3, 0.1, 0.2))
    cat = principal_frame(make_psi1(-2, 2)).state
    for n in nodes_list:
        grid = PhaseGrid.for_state(three, n)
        yield f"4D K=3 G={n}", _terms_4d(three, grid, n)
    for n in nodes_list:
        grid = PhaseGrid.for_state(cat, n)
        yield f"2D cat G={n * n}", _terms_2d(cat, grid, n * n)


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, nargs="+", default=[48, 64, 96])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"backends available: {sorted(BACKENDS)}")
    print(f"{'case':<20}{'backend':<10}{'points':>14}{'seconds':>10}{'Mpts/s':>10}{'speedup':>9}")
    for name, (x, y) in cases(args.nodes):
        points = x.shape[0] * y.shape[0]
        results = {}
        for backend in ("python", "cython"):
            if backend not in BACKENDS:
                continue
            core = BACKENDS[backend]
            results[backend] = best_time(lambda: core.abs_bilinear_rowsums(x, y, args.workers), args.repeat)
        base = results["python"][0]
        for backend, (secs, rows) in results.items():
            print(f"{name:<20}{backend:<10}{points:>14d}{secs:>10.3f}{points / secs / 1e6:>10.1f}{base / secs:>9.2f}")
        if len(results) == 2:
            same = np.array_equal(results["python"][1], results["cython"][1])
            diff = float(np.max(np.abs(results["python"][1] - results["cython"][1])))
            print(f"{'':<20}row sums identical: {same} (max diff {diff:.1e})")


if __name__ == "__main__":
    main()
