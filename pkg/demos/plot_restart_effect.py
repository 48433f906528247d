"""
What restarts buy
=================

Solve the same PageRank instances with and without restarts and compare
iteration counts. Runs without restarts are capped, so their counts are
lower bounds.
"""

import numpy as np

from pdhglp import SolverParams, solve
from pdhglp.instances import PagerankConfig, gen_pagerank

CAP = 10_000
rows = []
for seed in range(3):
    problem = gen_pagerank(PagerankConfig(1000, seed=seed))
    on = solve(problem, SolverParams(eps=1e-6))
    off = solve(problem, SolverParams(eps=1e-6, restarts=False, iter_limit=CAP))
    rows.append((seed, on.iterations, on.restarts, off.iterations, off.status.value))

print("seed  restarts-on  (restarts)  restarts-off  status-off")
for seed, it_on, n_restart, it_off, st_off in rows:
    print(f"{seed:4d}  {it_on:11d}  {n_restart:10d}  {it_off:12d}  {st_off}")
print("median ratio:", np.median([r[1] / r[3] for r in rows]))
