"""
PageRank as a feasibility LP
============================

Generate the PageRank LP on a random preferential-attachment graph, solve
it, and compare the LP point with power iteration.
"""

import time

import numpy as np

from pdhglp import SolverParams, solve
from pdhglp.instances import PagerankConfig, gen_pagerank, pagerank_vector, preferential_attachment_edges

cfg = PagerankConfig(n_nodes=2000, damping=0.85, seed=0)
problem = gen_pagerank(cfg)
print(f"m = {problem.m}, n = {problem.n}, nonzeros = {problem.a.nnz + problem.g.nnz}")

t0 = time.perf_counter()
result = solve(problem, SolverParams(eps=1e-6))
print(f"{result.status.value} in {result.iterations} iterations, {time.perf_counter() - t0:.2f}s")
print("sum(x) =", result.x.sum(), " min(x) =", result.x.min())

# Any feasible point works for the LP. The damped PageRank vector is one of them.
edges = preferential_attachment_edges(cfg.n_nodes, cfg.attachment, cfg.seed)
ranks = pagerank_vector(cfg.n_nodes, edges, cfg.damping)
print("power iteration slack min:", (problem.g.matvec(ranks) - problem.h).min())
top = np.argsort(ranks)[::-1][:5]
print("top nodes by PageRank:", top.tolist())
