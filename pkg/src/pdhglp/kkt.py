"""Residuals, duality gap, KKT error and the relative termination test."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .model import BoundClass, LpProblem


@dataclass(frozen=True)
class Iterate:
    """Primal-dual point ``z = (x, y)``; ``y`` stacks equality then inequality duals."""

    x: np.ndarray
    y: np.ndarray

    def copy(self) -> "Iterate":
        return Iterate(self.x.copy(), self.y.copy())


@dataclass(frozen=True)
class ResidualReport:
    primal_res: float
    dual_res: float
    gap_abs: float
    gap_signed: float  # dual_obj - primal_obj
    primal_obj: float
    dual_obj: float
    rel_primal: float
    rel_dual: float
    rel_gap: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ResidualReport":
        return cls(**{k: float(d[k]) for k in cls.__dataclass_fields__})


def derive_lambda(problem: LpProblem, y: np.ndarray, reduced: np.ndarray | None = None) -> np.ndarray:
    """Project the reduced cost ``c - K'y`` onto the bound-multiplier cone.

    ``reduced`` may be passed when ``c - K'y`` is already available.
    """
    if reduced is None:
        reduced = problem.c - problem.k.rmatvec(y)
    cls = problem.bound_classes
    lam = reduced.copy()
    lam[cls == BoundClass.FREE] = 0.0
    up = cls == BoundClass.UPPER_ONLY
    lam[up] = np.minimum(lam[up], 0.0)
    lo = cls == BoundClass.LOWER_ONLY
    lam[lo] = np.maximum(lam[lo], 0.0)
    return lam


def primal_residual_vector(problem: LpProblem, x: np.ndarray, kx: np.ndarray | None = None) -> np.ndarray:
    """Stacked ``(Ax - b, [h - Gx]+)``."""
    if kx is None:
        kx = problem.k.matvec(x)
    r = kx - problem.q
    m1 = problem.m1
    r[m1:] = np.maximum(-r[m1:], 0.0)
    return r


def bound_objective(problem: LpProblem, lam: np.ndarray) -> float:
    """``l'lam+ - u'lam-`` with ``0 * inf = 0``."""
    pos = lam > 0
    neg = lam < 0
    if np.any(~np.isfinite(problem.l[pos])) or np.any(~np.isfinite(problem.u[neg])):
        raise AssertionError("bound multiplier is nonzero on an infinite bound")
    return float(problem.l[pos] @ lam[pos] + problem.u[neg] @ lam[neg])


def compute_residuals(
    problem: LpProblem,
    z: Iterate,
    *,
    kx: np.ndarray | None = None,
    kty: np.ndarray | None = None,
) -> ResidualReport:
    """Absolute and relative optimality measures of ``z`` on ``problem``.

    ``kx`` and ``kty`` are optional precomputed products ``K x`` and ``K'y``.
    """
    x, y = z.x, z.y
    if kty is None:
        kty = problem.k.rmatvec(y)
    p_vec = primal_residual_vector(problem, x, kx)
    reduced = problem.c - kty
    lam = derive_lambda(problem, y, reduced)
    primal_res = float(np.linalg.norm(p_vec))
    dual_res = float(np.linalg.norm(reduced - lam))
    primal_obj = float(problem.c @ x) + problem.objective_offset
    dual_obj = float(problem.q @ y) + bound_objective(problem, lam) + problem.objective_offset
    gap = dual_obj - primal_obj
    q_norm = float(np.linalg.norm(problem.q))
    c_norm = float(np.linalg.norm(problem.c))
    return ResidualReport(
        primal_res=primal_res,
        dual_res=dual_res,
        gap_abs=abs(gap),
        gap_signed=gap,
        primal_obj=primal_obj,
        dual_obj=dual_obj,
        rel_primal=primal_res / (1.0 + q_norm),
        rel_dual=dual_res / (1.0 + c_norm),
        rel_gap=abs(gap) / (1.0 + abs(dual_obj) + abs(primal_obj)),
    )


def check_termination(report: ResidualReport, eps: float) -> bool:
    """True when all three relative measures are at most ``eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return report.rel_primal <= eps and report.rel_dual <= eps and report.rel_gap <= eps


def kkt_from_residuals(primal_res: float, dual_res: float, gap: float, omega: float) -> float:
    return math.sqrt(omega**2 * primal_res**2 + dual_res**2 / omega**2 + gap**2)


def kkt_omega(problem: LpProblem, z: Iterate, omega: float) -> float:
    """Primal-weighted KKT error of ``z``."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    rep = compute_residuals(problem, z)
    return kkt_from_residuals(rep.primal_res, rep.dual_res, rep.gap_abs, omega)
