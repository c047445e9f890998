"""Generate a planted instance and decode it with every solver.

    python3 demos/solve_walkthrough.py [n] [k]
"""

import sys
import time

from isdlab import (
    DecodingParams, bjmm_solve, dumer_solve, generate_instance, mmt_solve, nn_dumer_solve,
    prange_solve, predicted_trials, verify_solution,
)


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 48
    k = int(sys.argv[2]) if len(sys.argv) > 2 else 24
    inst = generate_instance(n, k, seed=1)
    print(f"instance n={n} k={k} w={inst.w}")
    p = min(2, inst.w - inst.w % 2)
    runs = [
        ("prange", lambda: prange_solve(inst, seed=0), DecodingParams()),
        ("dumer", lambda: dumer_solve(inst, DecodingParams(p=p, ell=4), seed=0),
         DecodingParams(p=p, ell=4)),
        ("mmt", lambda: mmt_solve(inst, DecodingParams(p=p, ell=6), seed=0),
         DecodingParams(p=p, ell=6)),
        ("bjmm", lambda: bjmm_solve(inst, DecodingParams(p=p, ell=6, eps_overlap=1), seed=0),
         DecodingParams(p=p, ell=6, eps_overlap=1)),
        ("nn-dumer", lambda: nn_dumer_solve(inst, DecodingParams(p=p, ell=3, ell_prime=2), seed=0),
         DecodingParams(p=p, ell=3, ell_prime=2)),
    ]
    for name, run, params in runs:
        t0 = time.perf_counter()
        e, stats = run()
        dt = time.perf_counter() - t0
        ok = e is not None and verify_solution(inst, e)
        pred = predicted_trials(n, k, inst.w, params)
        print(f"{name:9s} trials={stats.permutation_trials:6d} (1/P={pred:9.1f}) "
              f"ok={ok} time={dt:.3f}s")


if __name__ == "__main__":
    main()
