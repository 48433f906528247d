"""
Reading and writing MPS
=======================

Parse an MPS model with ranges, a maximization sense and general bounds,
write it back out, and check that nothing changed.
"""

import textwrap

from pdhglp import parse_mps, solve, SolverParams, write_mps

text = textwrap.dedent("""
    NAME          DEMO
    OBJSENSE
        MAX
    ROWS
     N  profit
     L  labor
     G  demand
     E  blend
    COLUMNS
        chairs  profit  3.0  labor  2.0
        chairs  demand  1.0  blend  1.0
        tables  profit  5.0  labor  4.0
        tables  blend   -1.0
    RHS
        rhs  labor  40.0  demand  2.0
    RANGES
        rng  demand  6.0
    BOUNDS
     UP bnd  tables  8.0
    ENDATA
""").lstrip()

problem = parse_mps(text)
# L rows are negated into G form and the ranged row becomes two G rows.
print(f"{problem.m1} equality rows, {problem.m2} inequality rows, {problem.n} columns")

again = parse_mps(write_mps(problem))
print("round trip exact:", again.equals(problem))

result = solve(problem, SolverParams(eps=1e-8))
print(result.status.value, "objective (maximized):", round(problem.user_objective(result.report.primal_obj), 6))
