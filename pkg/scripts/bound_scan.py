"""Optimizer sweep over mode counts and statistics for the maximally-entangled
projection probability; prints one row per configuration.

    python scripts/bound_scan.py --restarts 20 --max-iterations 4000 --seed 0
"""
import argparse
import time

from linpovm.entanglement import me_success_probability
from linpovm.modes import parametrized_unitary
from linpovm.optimize import OptimizerConfig, optimize
from linpovm.povm import povm_elements


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iterations", type=int, default=4000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--modes", type=int, nargs="+", default=[4, 5, 6])
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--sharpness", type=float, default=1.0,
                   help="surrogate exponent; use 2 to resolve the fermionic plateau")
    args = p.parse_args()

    print(f"{'stats':8} {'n':>2} {'best J':>14} {'hard@1e-5':>12} {'hard@1e-7':>12} {'hard@1e-9':>12} "
          f"{'#restarts at 1/2':>17} {'sec':>6}")
    for stats in ("boson", "fermion"):
        for n in args.modes:
            cfg = OptimizerConfig(n=n, d=args.d, statistics=stats, restarts=args.restarts,
                                  max_iterations=args.max_iterations, seed=args.seed,
                                  sharpness=args.sharpness)
            t0 = time.perf_counter()
            res = optimize(cfg)
            els = povm_elements(parametrized_unitary(n, res.best_params), args.d, stats)
            hard = [me_success_probability(els, args.d, tol) for tol in (1e-5, 1e-7, 1e-9)]
            hits = sum(r.hard_success >= 0.5 - 1e-3 for r in res.restarts)
            print(f"{stats:8} {n:2d} {res.best_surrogate:14.12f} {hard[0]:12.9f} {hard[1]:12.9f} "
                  f"{hard[2]:12.9f} {hits:17d} {time.perf_counter() - t0:6.1f}")


if __name__ == "__main__":
    main()
