"""Command-line interface: ``solve``, ``bench`` and ``gen``.

Exit codes: 0 optimal / suite complete, 2 limit reached, 3 input error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import CLOCKS, run_suite
from .instances import PagerankConfig, gen_pagerank, gen_random_lp, pagerank_lp, read_edge_list
from .mps import read_mps, save_mps
from .solver import NumericalError, SolverParams, Status, solve

EXIT_OK = 0
EXIT_LIMIT = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=1e-4, help="relative optimality tolerance")
    p.add_argument("--time-limit", type=float, default=3600.0, help="seconds per solve")
    p.add_argument("--iter-limit", type=int, default=None)
    p.add_argument("--no-scaling", action="store_true")
    p.add_argument("--no-restarts", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", type=Path, default=None, help="JSON file of solver options")


def _params(args: argparse.Namespace) -> SolverParams:
    config = {}
    if args.config is not None:
        config = json.loads(args.config.read_text())
    config.update(
        eps=args.eps,
        time_limit=args.time_limit,
        iter_limit=args.iter_limit,
        seed=args.seed,
    )
    if args.no_scaling:
        config["scaling"] = False
    if args.no_restarts:
        config["restarts"] = False
    if getattr(args, "log_every", None):
        config["log_every"] = args.log_every
    return SolverParams.from_config(config)


def solution_dict(problem, result) -> dict:
    rep = result.report
    return {
        "status": result.status.value,
        "primal_objective": problem.user_objective(rep.primal_obj),
        "dual_objective": problem.user_objective(rep.dual_obj),
        "iterations": result.iterations,
        "restarts": result.restarts,
        "x": result.x.tolist(),
        "y": result.y.tolist(),
        "lambda": result.lambda_.tolist(),
        "residuals": rep.to_dict(),
    }


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        problem = read_mps(args.file, strict=args.strict)
        params = _params(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = solve(problem, params)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    rep = result.report
    print(
        f"status={result.status.value} objective={problem.user_objective(rep.primal_obj):.12g} "
        f"iterations={result.iterations} restarts={result.restarts} time={result.wall_time:.3f}"
    )
    if args.out is not None:
        Path(args.out).write_text(json.dumps(solution_dict(problem, result), indent=2) + "\n")
    return EXIT_OK if result.status is Status.OPTIMAL else EXIT_LIMIT


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        params = _params(args)
        summary = run_suite(args.dir, params, delta=args.delta, workers=args.workers, clock=args.clock)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for r in summary.records:
        print(f"{r.instance}: status={r.status} time={r.wall_time:.3f} iterations={r.iterations}")
    unit = "s" if summary.clock == "wall" else "iterations"
    print(f"solved={summary.solved_count}/{len(summary.records)} sgm{summary.delta:g}={summary.sgm10:.6g} {unit}")
    if args.report is not None:
        Path(args.report).write_text(summary.to_json())
    if args.csv is not None:
        Path(args.csv).write_text(summary.to_csv())
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        if args.kind == "pagerank":
            if args.edges is not None:
                n_nodes, edges = read_edge_list(args.edges)
                problem = pagerank_lp(n_nodes, edges, args.damping, name=Path(args.edges).stem)
            else:
                if args.nodes is None:
                    raise ValueError("--nodes is required without --edges")
                problem = gen_pagerank(PagerankConfig(args.nodes, args.damping, args.attachment, args.seed))
        else:
            problem = gen_random_lp(args.rows, args.cols, args.density, args.seed)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    save_mps(problem, args.out)
    print(f"wrote {args.out}: m={problem.m} n={problem.n} nnz={problem.a.nnz + problem.g.nnz}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdhglp", description="Restarted PDHG linear programming solver")
    parser.add_argument("-v", "--verbose", action="store_true", help="show progress log lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one MPS file")
    p.add_argument("file", type=Path)
    _add_solver_args(p)
    p.add_argument("--log-every", type=int, default=64, help="iterations between progress lines")
    p.add_argument("--strict", action="store_true", help="fixed-format MPS columns")
    p.add_argument("--out", type=Path, default=None, help="write the solution as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="solve a directory of MPS files and report SGM")
    p.add_argument("dir", type=Path)
    _add_solver_args(p)
    p.add_argument("--delta", type=float, default=10.0, help="SGM shift")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--clock", choices=CLOCKS, default="wall",
                   help="aggregate wall time or iteration counts (the latter is reproducible)")
    p.add_argument("--report", type=Path, default=None, help="JSON report path")
    p.add_argument("--csv", type=Path, default=None, help="CSV report path")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate an instance as MPS")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("pagerank")
    g.add_argument("--nodes", type=int, default=None)
    g.add_argument("--edges", type=Path, default=None, help="edge-list file instead of a random graph")
    g.add_argument("--damping", type=float, default=0.85)
    g.add_argument("--attachment", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)
    g = gen.add_parser("random")
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
