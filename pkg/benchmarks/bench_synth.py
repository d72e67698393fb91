"""Compare the numba and numpy backends of the gate search.

    python3 benchmarks/bench_synth.py [--evals N] [--restarts R] [--iters K]

Times single objective evaluations and a short multi-restart search on the
four-slot commutator ansatz.  The first numba call includes JIT compilation
(or a cache load), reported separately.
"""

import argparse
import math
import time

import numpy as np

from fredkin_lab import _kernels
from fredkin_lab.constructions import m_matrix
from fredkin_lab.synth import SynthProblem, optimize, parse_slots


def bench_objective(backend, problem, evals, seed=0):
    lo, hi, tc = problem.kernel_args()
    xs = np.random.default_rng(seed).uniform(-math.pi, math.pi, (evals, problem.nparams))
    t0 = time.perf_counter()
    backend.objective(xs[0], lo, hi, tc)
    first = time.perf_counter() - t0
    t0 = time.perf_counter()
    total = 0.0
    for x in xs:
        total += backend.objective(x, lo, hi, tc)
    return first, (time.perf_counter() - t0) / evals, total


def bench_search(name, problem):
    optimize(SynthProblem(problem.target, problem.slots, 1, 5, 0), name)  # warm up
    t0 = time.perf_counter()
    r = optimize(problem, name)
    return time.perf_counter() - t0, r.best_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--evals", type=int, default=20000)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--iters", type=int, default=2000)
    args = ap.parse_args()

    names = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    problem = SynthProblem(
        m_matrix(math.pi / 2), parse_slots("bc,ac,bc,ac"), restarts=args.restarts, iterations=args.iters, seed=7
    )

    print(f"objective: {args.evals} evaluations, 16 parameters")
    per_eval = {}
    for name in names:
        first, each, checksum = bench_objective(_kernels.get_backend(name), problem, args.evals)
        per_eval[name] = each
        print(f"  {name:6s} first call {first * 1e3:9.2f} ms   per call {each * 1e6:8.2f} us   checksum {checksum:.12f}")

    print(f"search: {args.restarts} restarts x {args.iters} iterations, seed 7")
    wall = {}
    for name in names:
        wall[name], best = bench_search(name, problem)
        print(f"  {name:6s} {wall[name]:8.3f} s   best_distance {best:.3e}")

    if len(names) == 2:
        print(f"speedup: objective {per_eval['numpy'] / per_eval['numba']:.1f}x, "
              f"search {wall['numpy'] / wall['numba']:.1f}x")
    else:
        print("numba not installed; numpy backend only")


if __name__ == "__main__":
    main()
