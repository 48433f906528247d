"""Restarted primal-dual hybrid gradient for LP.

The saddle-point problem ``min_{x in X} max_{y in Y} c'x - y'Kx + q'y`` is
iterated with projected primal/dual steps. Within each restart loop a
uniform average of the iterates is kept; at every evaluation the better of
the current and averaged point (in the primal-weighted KKT error) is the
restart candidate, and the loop restarts from it on sufficient decay, on
necessary decay without local progress, or when the loop grows too long.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .kkt import (
    Iterate,
    ResidualReport,
    check_termination,
    compute_residuals,
    derive_lambda,
    kkt_from_residuals,
)
from .model import LpProblem
from .scaling import ScalingInfo, apply_scaling, default_scaling
from .sparse import SparseMatrix

logger = logging.getLogger(__name__)

_WEIGHT_GUARD = 1e-10


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"


class NumericalError(ArithmeticError):
    """Raised when an iterate stops being finite."""


@dataclass
class SolverParams:
    eps: float = 1e-4
    time_limit: float = 3600.0
    iter_limit: int | None = None
    sufficient_decay: float = 0.2
    necessary_decay: float = 0.8
    long_loop_frac: float = 0.36
    check_every: int = 64
    scaling: bool = True
    ruiz_iters: int = 10
    pc_alpha: float = 1.0
    restarts: bool = True
    adaptive_step: bool = False
    power_iters: int = 100
    seed: int = 0
    log_every: int | None = None
    debug: bool = False

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0 < self.sufficient_decay < self.necessary_decay < 1:
            raise ValueError("need 0 < sufficient_decay < necessary_decay < 1")
        if not 0 < self.long_loop_frac < 1:
            raise ValueError("long_loop_frac must lie in (0, 1)")
        if self.check_every < 1:
            raise ValueError("check_every must be >= 1")
        if self.iter_limit is not None and self.iter_limit < 0:
            raise ValueError("iter_limit must be nonnegative")

    @classmethod
    def from_config(cls, config: dict) -> "SolverParams":
        """Build from a flat or nested mapping.

        The scaling keys may be given as ``{"scaling": {"enabled": ..,
        "ruiz_iters": .., "pc_alpha": ..}}`` or dotted (``"scaling.ruiz_iters"``).
        """
        flat: dict = {}
        for key, value in config.items():
            if key == "scaling" and isinstance(value, dict):
                for sub, v in value.items():
                    flat[f"scaling.{sub}"] = v
            else:
                flat[key] = value
        renames = {"scaling.enabled": "scaling", "scaling.ruiz_iters": "ruiz_iters", "scaling.pc_alpha": "pc_alpha"}
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in flat.items():
            name = renames.get(key, key)
            if name not in known:
                raise KeyError(f"unknown solver option {key!r}")
            kwargs[name] = value
        return cls(**kwargs)


@dataclass
class SolverState:
    current: Iterate
    average: Iterate
    avg_weight: float
    loop_start: Iterate
    eta: float
    omega: float
    t: int = 0
    k: int = 0
    n_restarts: int = 0
    last_candidate_kkt: float = math.inf
    loop_start_kkt: float = math.inf
    loop_lengths: list[int] = field(default_factory=list)


@dataclass
class SolveResult:
    status: Status
    x: np.ndarray
    y: np.ndarray
    lambda_: np.ndarray
    report: ResidualReport
    iterations: int
    restarts: int
    wall_time: float
    scale_time: float = 0.0
    omega: float = 1.0
    eta: float = 1.0
    loop_lengths: list[int] = field(default_factory=list, repr=False)
    history: list[dict] = field(default_factory=list, repr=False)


def estimate_op_norm(k: SparseMatrix, iters: int = 100, seed: int = 0) -> float:
    """Power-iteration estimate of the spectral norm of ``k``.

    Returns ``||K v||`` for a unit vector ``v``, which never exceeds the
    true norm. Deterministic for a fixed ``seed``.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if k.nnz == 0 or k.n_cols == 0 or k.n_rows == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(k.n_cols)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = k.rmatvec(k.matvec(v))
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            # v landed in the null space; restart from a fresh draw
            v = rng.standard_normal(k.n_cols)
            v /= np.linalg.norm(v)
            continue
        v = w / nrm
    return float(np.linalg.norm(k.matvec(v)))


def primal_step(
    problem: LpProblem,
    x: np.ndarray,
    y: np.ndarray,
    eta: float,
    omega: float,
    kty: np.ndarray | None = None,
) -> np.ndarray:
    """``proj_[l,u](x - (eta/omega) (c - K'y))``."""
    if kty is None:
        kty = problem.k.rmatvec(y)
    return np.clip(x - (eta / omega) * (problem.c - kty), problem.l, problem.u)


def dual_step(
    problem: LpProblem,
    x_new: np.ndarray,
    x_old: np.ndarray,
    y: np.ndarray,
    eta: float,
    omega: float,
    k_extrap: np.ndarray | None = None,
) -> np.ndarray:
    """``proj_Y(y + eta*omega (q - K(2 x_new - x_old)))``.

    Only the inequality duals (after the first ``m1`` entries) are clamped
    at zero. ``k_extrap`` may carry a precomputed ``K(2 x_new - x_old)``.
    """
    if k_extrap is None:
        k_extrap = problem.k.matvec(2.0 * x_new - x_old)
    y_new = y + (eta * omega) * (problem.q - k_extrap)
    m1 = problem.m1
    np.maximum(y_new[m1:], 0.0, out=y_new[m1:])
    return y_new


def update_average(state: SolverState, z_new: Iterate) -> SolverState:
    """Fold ``z_new`` into the uniform running mean of the current loop."""
    w = state.avg_weight
    state.average = Iterate(
        (w * state.average.x + z_new.x) / (w + 1.0),
        (w * state.average.y + z_new.y) / (w + 1.0),
    )
    state.avg_weight = w + 1.0
    return state


def choose_restart_candidate(problem: LpProblem, z_cur: Iterate, z_avg: Iterate, omega: float) -> Iterate:
    """Current iterate if strictly better in KKT error, otherwise the average."""
    return z_cur if _kkt(problem, z_cur, omega) < _kkt(problem, z_avg, omega) else z_avg


def should_restart(
    state: SolverState,
    kkt_candidate: float,
    kkt_loop_start: float,
    kkt_prev_candidate: float,
    params: SolverParams | None = None,
) -> bool:
    """Restart test on the candidate's KKT error.

    Fires on sufficient decay (``<= 0.2`` of the loop-start error), on
    necessary decay (``<= 0.8``) while the error went up since the previous
    evaluation, or when the loop has run ``t >= 0.36 k`` iterations.
    """
    if params is None:
        sufficient, necessary, frac = 0.2, 0.8, 0.36
    else:
        sufficient, necessary, frac = params.sufficient_decay, params.necessary_decay, params.long_loop_frac
    if kkt_candidate <= sufficient * kkt_loop_start:
        return True
    if kkt_candidate <= necessary * kkt_loop_start and kkt_candidate > kkt_prev_candidate:
        return True
    return state.t >= frac * state.k


def update_primal_weight(omega: float, dx_norm: float, dy_norm: float, smoothing: float = 0.5) -> float:
    """Log-space smoothed primal weight; unchanged unless both movements are nonnegligible."""
    if dx_norm > _WEIGHT_GUARD and dy_norm > _WEIGHT_GUARD:
        return math.exp(smoothing * math.log(dy_norm / dx_norm) + (1.0 - smoothing) * math.log(omega))
    return omega


def initial_primal_weight(problem: LpProblem) -> float:
    c_norm = float(np.linalg.norm(problem.c))
    q_norm = float(np.linalg.norm(problem.q))
    if c_norm > _WEIGHT_GUARD and q_norm > _WEIGHT_GUARD:
        return c_norm / q_norm
    return 1.0


def _kkt(problem: LpProblem, z: Iterate, omega: float, kx=None, kty=None) -> float:
    rep = compute_residuals(problem, z, kx=kx, kty=kty)
    return kkt_from_residuals(rep.primal_res, rep.dual_res, rep.gap_abs, omega)


class _Evaluation:
    """KKT data of one point in scaled and original space."""

    __slots__ = ("z", "kx", "kkt", "report", "kkt1")

    def __init__(self, z, kx, kkt, report, kkt1):
        self.z, self.kx, self.kkt, self.report, self.kkt1 = z, kx, kkt, report, kkt1


def solve(problem: LpProblem, params: SolverParams | None = None) -> SolveResult:
    """Solve ``problem`` with restarted PDHG.

    Residuals for the termination test are always measured on the original
    (unscaled) problem. Returns the first point meeting the tolerance, or on
    a limit the evaluated point with the smallest unweighted KKT error.

    Raises:
        NumericalError: if an iterate becomes non-finite.
    """
    params = params or SolverParams()
    start = time.perf_counter()

    if params.scaling:
        info = default_scaling(problem.k, params.ruiz_iters, params.pc_alpha)
    else:
        info = ScalingInfo.identity(problem.m, problem.n)
    scaled = apply_scaling(problem, info) if params.scaling else problem
    scale_time = time.perf_counter() - start

    clock0 = time.perf_counter()
    deadline = clock0 + params.time_limit
    iter_limit = params.iter_limit if params.iter_limit is not None else math.inf

    k_mat = scaled.k
    c, q, lo, hi, m1 = scaled.c, scaled.q, scaled.l, scaled.u, scaled.m1

    norm_k = estimate_op_norm(k_mat, params.power_iters, params.seed)
    eta = 0.9 / norm_k if norm_k > 0 else 1.0
    omega = initial_primal_weight(scaled)

    x = np.clip(np.zeros(scaled.n), lo, hi)
    y = np.zeros(scaled.m)
    z0 = Iterate(x, y)
    state = SolverState(
        current=z0, average=Iterate(x.copy(), y.copy()), avg_weight=0.0,
        loop_start=z0, eta=eta, omega=omega,
    )
    kx = k_mat.matvec(x)
    kty = k_mat.rmatvec(y)
    state.loop_start_kkt = _kkt(scaled, z0, omega, kx=kx, kty=kty)

    history: list[dict] = []
    best: _Evaluation | None = None
    found: _Evaluation | None = None
    status = Status.ITER_LIMIT
    log_every = params.log_every or params.check_every
    last_log = -log_every

    def evaluate(z: Iterate, kx_s: np.ndarray | None = None, kty_s: np.ndarray | None = None) -> _Evaluation:
        if kx_s is None:
            kx_s = k_mat.matvec(z.x)
        if kty_s is None:
            kty_s = k_mat.rmatvec(z.y)
        rep_s = compute_residuals(scaled, z, kx=kx_s, kty=kty_s)
        kkt_w = kkt_from_residuals(rep_s.primal_res, rep_s.dual_res, rep_s.gap_abs, state.omega)
        if not math.isfinite(kkt_w):
            raise NumericalError(f"non-finite iterate at iteration {state.k}")
        # clip away rounding from unscaling so the point stays inside [l, u]
        z_orig = Iterate(np.clip(info.unscale_primal(z.x), problem.l, problem.u), info.unscale_dual(z.y))
        rep = compute_residuals(problem, z_orig)
        kkt1 = kkt_from_residuals(rep.primal_res, rep.dual_res, rep.gap_abs, 1.0)
        return _Evaluation(z, kx_s, kkt_w, rep, kkt1)

    while True:
        if state.k >= iter_limit:
            status = Status.ITER_LIMIT
            break
        if time.perf_counter() >= deadline:
            status = Status.TIME_LIMIT
            break

        x, y = state.current.x, state.current.y
        if params.adaptive_step:
            x_new, y_new, kx_new, kty = _adaptive_step(scaled, x, y, kx, kty, state)
        else:
            x_new = primal_step(scaled, x, y, state.eta, state.omega, kty=kty)
            kx_new = k_mat.matvec(x_new)
            y_new = dual_step(scaled, x_new, x, y, state.eta, state.omega, k_extrap=2.0 * kx_new - kx)
        z_new = Iterate(x_new, y_new)
        state.current = z_new
        state.k += 1
        state.t += 1
        update_average(state, z_new)
        kx = kx_new
        kty = k_mat.rmatvec(y_new)

        if params.debug:
            assert np.all(x_new >= lo) and np.all(x_new <= hi)
            assert np.all(y_new[m1:] >= 0)

        if state.k % params.check_every:
            continue

        ev_cur = evaluate(z_new, kx, kty)
        ev_avg = evaluate(state.average)
        # ties go to the average
        cand, other = (ev_cur, ev_avg) if ev_cur.kkt < ev_avg.kkt else (ev_avg, ev_cur)
        for ev in (cand, other):
            if best is None or ev.kkt1 < best.kkt1:
                best = ev
        if state.k - last_log >= log_every:
            last_log = state.k
            rec = _log_record(state, cand.report, time.perf_counter() - clock0)
            history.append(rec)
            logger.info(" ".join(f"{key}={_fmt(val)}" for key, val in rec.items()))
        for ev in (cand, other):
            if check_termination(ev.report, params.eps):
                found = ev
                break
        if found is not None:
            status = Status.OPTIMAL
            break

        if params.restarts and should_restart(state, cand.kkt, state.loop_start_kkt, state.last_candidate_kkt, params):
            _restart(state, cand)
            kx = cand.kx
            kty = k_mat.rmatvec(state.current.y)
        else:
            state.last_candidate_kkt = cand.kkt

    if found is None:
        # final look at the last iterates before giving up
        for z in (state.current, state.average):
            ev = evaluate(z)
            if best is None or ev.kkt1 < best.kkt1:
                best = ev
            if check_termination(ev.report, params.eps):
                found = ev
                status = Status.OPTIMAL
                break
    result_ev = found if found is not None else best
    wall = time.perf_counter() - clock0

    x_out = np.clip(info.unscale_primal(result_ev.z.x), problem.l, problem.u)
    y_out = info.unscale_dual(result_ev.z.y)
    lam = derive_lambda(problem, y_out)
    return SolveResult(
        status=status,
        x=x_out,
        y=y_out,
        lambda_=lam,
        report=result_ev.report,
        iterations=state.k,
        restarts=state.n_restarts,
        wall_time=wall,
        scale_time=scale_time,
        omega=state.omega,
        eta=state.eta,
        loop_lengths=state.loop_lengths + [state.t],
        history=history,
    )


def _restart(state: SolverState, cand: _Evaluation) -> None:
    z_c = cand.z
    dx = float(np.linalg.norm(z_c.x - state.loop_start.x))
    dy = float(np.linalg.norm(z_c.y - state.loop_start.y))
    state.omega = update_primal_weight(state.omega, dx, dy)
    state.current = z_c
    state.loop_start = z_c
    state.average = Iterate(z_c.x.copy(), z_c.y.copy())
    state.avg_weight = 0.0
    state.loop_lengths.append(state.t)
    state.t = 0
    state.n_restarts += 1
    state.loop_start_kkt = cand.kkt
    state.last_candidate_kkt = math.inf


def _adaptive_step(problem: LpProblem, x, y, kx, kty, state: SolverState):
    """Backtracking step-size search; accepted steps satisfy the local PDHG bound."""
    k_mat = problem.k
    eta = state.eta
    while True:
        x_new = primal_step(problem, x, y, eta, state.omega, kty=kty)
        kx_new = k_mat.matvec(x_new)
        y_new = dual_step(problem, x_new, x, y, eta, state.omega, k_extrap=2.0 * kx_new - kx)
        dx = x_new - x
        dy = y_new - y
        interaction = abs(float(dy @ (kx_new - kx)))
        movement = 0.5 * (state.omega * float(dx @ dx) + float(dy @ dy) / state.omega)
        eta_limit = movement / interaction if interaction > 0 else math.inf
        j = state.k + 1
        eta_next = min((1 - (j + 1) ** -0.3) * eta_limit, (1 + (j + 1) ** -0.6) * eta)
        if eta <= eta_limit:
            state.eta = eta_next
            return x_new, y_new, kx_new, kty
        eta = eta_next


def _log_record(state: SolverState, rep: ResidualReport, elapsed: float) -> dict:
    return {
        "iter": state.k,
        "time": elapsed,
        "rel_primal": rep.rel_primal,
        "rel_dual": rep.rel_dual,
        "rel_gap": rep.rel_gap,
        "omega": state.omega,
        "restarts": state.n_restarts,
    }


def _fmt(v) -> str:
    return str(v) if isinstance(v, int) else f"{v:.6e}"
