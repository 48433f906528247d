"""Benchmark harness: batch solves and shifted-geometric-mean aggregation."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .kkt import ResidualReport
from .mps import read_mps
from .solver import NumericalError, SolverParams, Status, solve

ERROR = "Error"
CLOCKS = ("wall", "iterations")


@dataclass
class BenchRecord:
    instance: str
    status: str
    wall_time: float
    iterations: int
    restarts: int = 0
    residuals: ResidualReport | None = None
    message: str | None = None
    parse_time: float = 0.0
    scale_time: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status == Status.OPTIMAL.value

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        d["residuals"] = self.residuals.to_dict() if self.residuals is not None else None
        if not timings:
            for key in ("wall_time", "parse_time", "scale_time"):
                d.pop(key)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BenchRecord":
        d = dict(d)
        res = d.pop("residuals", None)
        for key in ("wall_time", "parse_time", "scale_time"):
            d.setdefault(key, 0.0)
        return cls(**d, residuals=ResidualReport.from_dict(res) if res is not None else None)


@dataclass
class SuiteSummary:
    records: list[BenchRecord]
    sgm10: float
    solved_count: int
    tolerance: float
    delta: float = 10.0
    time_limit: float = 3600.0
    clock: str = "wall"

    def to_dict(self) -> dict:
        timings = self.clock == "wall"
        return {
            "clock": self.clock,
            "delta": self.delta,
            "records": [r.to_dict(timings=timings) for r in self.records],
            "sgm10": self.sgm10,
            "solved_count": self.solved_count,
            "time_limit": self.time_limit,
            "tolerance": self.tolerance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SuiteSummary":
        d = json.loads(text)
        return cls(
            records=[BenchRecord.from_dict(r) for r in d["records"]],
            sgm10=d["sgm10"],
            solved_count=d["solved_count"],
            tolerance=d["tolerance"],
            delta=d["delta"],
            time_limit=d["time_limit"],
            clock=d["clock"],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["instance", "status", "wall_time", "iterations", "restarts",
                "rel_primal", "rel_dual", "rel_gap", "primal_obj", "dual_obj", "message"]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in self.records:
            res = r.residuals
            writer.writerow([
                r.instance, r.status, repr(r.wall_time), r.iterations, r.restarts,
                *(repr(getattr(res, k)) if res else "" for k in ("rel_primal", "rel_dual", "rel_gap", "primal_obj", "dual_obj")),
                r.message or "",
            ])
        return buf.getvalue()


def sgm(
    times: Sequence[float],
    delta: float = 10.0,
    time_limit: float | None = None,
    solved_flags: Sequence[bool] | None = None,
) -> float:
    """Shifted geometric mean ``(prod(t_i + delta))^(1/n) - delta``.

    Entries flagged unsolved are charged ``time_limit``. Computed in log space.
    """
    times = list(times)
    if not times:
        raise ValueError("sgm of an empty list")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if solved_flags is not None:
        if len(solved_flags) != len(times):
            raise ValueError("solved_flags and times differ in length")
        if not all(solved_flags) and time_limit is None:
            raise ValueError("time_limit is required when some instances are unsolved")
        times = [t if ok else time_limit for t, ok in zip(times, solved_flags)]
    if any(t < 0 for t in times):
        raise ValueError("times must be nonnegative")
    if delta == 0 and any(t == 0 for t in times):
        return 0.0
    mean_log = math.fsum(math.log(t + delta) for t in times) / len(times)
    return math.exp(mean_log) - delta


def list_instances(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    files = [p for p in directory.iterdir() if p.is_file() and (p.name.endswith(".mps") or p.name.endswith(".mps.gz"))]
    return sorted(files, key=lambda p: p.name)


def _instance_name(path: Path) -> str:
    name = path.name
    for suffix in (".gz", ".mps"):
        name = name.removesuffix(suffix)
    return name


def run_instance(path: str | Path, params: SolverParams) -> BenchRecord:
    """Parse and solve one file; failures become an ``Error`` record."""
    path = Path(path)
    name = _instance_name(path)
    t0 = time.perf_counter()
    try:
        problem = read_mps(path)
    except (OSError, ValueError, EOFError) as exc:
        return BenchRecord(name, ERROR, 0.0, 0, message=f"{type(exc).__name__}: {exc}")
    parse_time = time.perf_counter() - t0
    try:
        result = solve(problem, params)
    except NumericalError as exc:
        return BenchRecord(name, ERROR, 0.0, 0, message=f"numerical failure: {exc}", parse_time=parse_time)
    return BenchRecord(
        instance=name,
        status=result.status.value,
        wall_time=result.wall_time,
        iterations=result.iterations,
        restarts=result.restarts,
        residuals=result.report,
        parse_time=parse_time,
        scale_time=result.scale_time,
    )


def run_suite(
    directory: str | Path,
    params: SolverParams,
    *,
    delta: float = 10.0,
    workers: int = 1,
    clock: str = "wall",
) -> SuiteSummary:
    """Solve every ``.mps``/``.mps.gz`` file in ``directory`` and aggregate.

    ``clock="wall"`` aggregates solve wall time (parse and scaling excluded)
    with unsolved instances charged ``params.time_limit``. ``clock="iterations"``
    aggregates iteration counts instead, charging unsolved instances
    ``params.iter_limit``; that report is reproducible byte for byte.
    """
    if clock not in CLOCKS:
        raise ValueError(f"clock must be one of {CLOCKS}")
    if clock == "iterations" and params.iter_limit is None:
        raise ValueError("the iteration clock needs params.iter_limit")
    paths = list_instances(directory)
    if not paths:
        raise ValueError(f"no MPS files in {directory}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_instance, paths, [params] * len(paths)))
    else:
        records = [run_instance(p, params) for p in paths]
    return summarize(records, params, delta=delta, clock=clock)


def summarize(records: list[BenchRecord], params: SolverParams, *, delta: float = 10.0, clock: str = "wall") -> SuiteSummary:
    flags = [r.solved for r in records]
    if clock == "wall":
        times = [r.wall_time for r in records]
        limit = params.time_limit
    else:
        times = [float(r.iterations) for r in records]
        limit = float(params.iter_limit)
    return SuiteSummary(
        records=records,
        sgm10=sgm(times, delta, limit, flags),
        solved_count=sum(flags),
        tolerance=params.eps,
        delta=delta,
        time_limit=limit,
        clock=clock,
    )
