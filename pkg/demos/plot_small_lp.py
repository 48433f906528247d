"""
Solving a small LP by hand
==========================

Build a two-variable problem directly from arrays, solve it, and read off
the primal point, the duals and the termination measures.
"""

import numpy as np

from pdhglp import LpProblem, SolverParams, SparseMatrix, solve

# minimize x1 + 2 x2  subject to  x1 + x2 >= 1,  x1 - x2 >= -0.5,  0 <= x <= 10
problem = LpProblem(
    a=SparseMatrix.empty(0, 2),
    g=SparseMatrix([[1.0, 1.0], [1.0, -1.0]]),
    c=np.array([1.0, 2.0]),
    b=np.zeros(0),
    h=np.array([1.0, -0.5]),
    l=np.zeros(2),
    u=np.full(2, 10.0),
    name="two_vars",
)

result = solve(problem, SolverParams(eps=1e-8))
print(result.status.value, "after", result.iterations, "iterations and", result.restarts, "restarts")
print("x      =", np.round(result.x, 8))
print("y      =", np.round(result.y, 8))
print("lambda =", np.round(result.lambda_, 8))

# The report holds absolute and relative residuals on the original data.
rep = result.report
print(f"objective {rep.primal_obj:.8f} (dual {rep.dual_obj:.8f})")
print(f"relative primal {rep.rel_primal:.1e}, dual {rep.rel_dual:.1e}, gap {rep.rel_gap:.1e}")
