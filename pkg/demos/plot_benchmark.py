"""
Benchmarking a directory
========================

Write a small suite of MPS files, run it at two tolerances, and report the
shifted geometric mean of solve times.
"""

import tempfile
from pathlib import Path

from pdhglp import SolverParams, save_mps
from pdhglp.bench import run_suite, sgm
from pdhglp.instances import PagerankConfig, gen_pagerank, gen_random_lp

# The shift keeps tiny times from dominating the mean.
print("sgm([10, 40]) =", sgm([10.0, 40.0]))
print("unsolved charged the limit:", sgm([3.0, 1.0], time_limit=100.0, solved_flags=[False, True]))

with tempfile.TemporaryDirectory() as tmp:
    suite = Path(tmp)
    for seed in range(3):
        save_mps(gen_random_lp(60, 40, seed=seed, n_eq=5), suite / f"random_{seed}.mps")
        save_mps(gen_pagerank(PagerankConfig(500, seed=seed)), suite / f"pagerank_{seed}.mps.gz")

    for eps in (1e-4, 1e-8):
        summary = run_suite(suite, SolverParams(eps=eps, time_limit=60))
        print(f"eps={eps:g}: solved {summary.solved_count}/{len(summary.records)}, sgm10 = {summary.sgm10:.4f}s")

    # Counting iterations instead of seconds gives a reproducible report.
    report = run_suite(suite, SolverParams(eps=1e-6, iter_limit=50_000), clock="iterations")
    print(report.to_json()[:300], "...")
