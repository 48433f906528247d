"""Diagonal preconditioning of the constraint matrix.

The scaled problem uses ``K' = D_r K D_c``. Its iterates relate to the
original ones by ``x = D_c x'`` and ``y = D_r y'``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LpProblem
from .sparse import SparseMatrix


@dataclass(frozen=True)
class ScalingInfo:
    row_scale: np.ndarray
    col_scale: np.ndarray

    def __post_init__(self):
        for name in ("row_scale", "col_scale"):
            v = np.asarray(getattr(self, name), dtype=np.float64)
            if not (np.all(np.isfinite(v)) and np.all(v > 0)):
                raise ValueError(f"{name} must be strictly positive and finite")
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls, m: int, n: int) -> "ScalingInfo":
        return cls(np.ones(m), np.ones(n))

    def compose(self, other: "ScalingInfo") -> "ScalingInfo":
        """Scaling equivalent to applying ``self`` and then ``other``."""
        return ScalingInfo(self.row_scale * other.row_scale, self.col_scale * other.col_scale)

    def inverse(self) -> "ScalingInfo":
        return ScalingInfo(1.0 / self.row_scale, 1.0 / self.col_scale)

    # iterate maps between the original and scaled spaces
    def scale_primal(self, x: np.ndarray) -> np.ndarray:
        return x / self.col_scale

    def unscale_primal(self, x: np.ndarray) -> np.ndarray:
        return x * self.col_scale

    def scale_dual(self, y: np.ndarray) -> np.ndarray:
        return y / self.row_scale

    def unscale_dual(self, y: np.ndarray) -> np.ndarray:
        return y * self.row_scale


def _inv_sqrt_or_one(v: np.ndarray) -> np.ndarray:
    out = np.ones_like(v)
    pos = v > 0
    out[pos] = 1.0 / np.sqrt(v[pos])
    return out


def ruiz_equilibrate(k: SparseMatrix, iters: int = 10) -> ScalingInfo:
    """Ruiz infinity-norm equilibration.

    Each sweep divides every row and column by the square root of its
    current infinity norm. Empty rows and columns keep scale 1.
    """
    row = np.ones(k.n_rows)
    col = np.ones(k.n_cols)
    cur = k
    for _ in range(iters):
        r = _inv_sqrt_or_one(cur.row_abs_max())
        s = _inv_sqrt_or_one(cur.col_abs_max())
        row *= r
        col *= s
        cur = cur.scaled(r, s)
    return ScalingInfo(row, col)


def pock_chambolle_scale(k: SparseMatrix, alpha: float = 1.0) -> ScalingInfo:
    """Pock-Chambolle diagonal scaling with exponent ``alpha`` in [0, 2]."""
    if not 0.0 <= alpha <= 2.0:
        raise ValueError("alpha must lie in [0, 2]")
    row = _inv_sqrt_or_one(k.row_abs_pow_sum(2.0 - alpha))
    col = _inv_sqrt_or_one(k.col_abs_pow_sum(alpha))
    return ScalingInfo(row, col)


def default_scaling(k: SparseMatrix, ruiz_iters: int = 10, pc_alpha: float | None = 1.0) -> ScalingInfo:
    """Ruiz sweeps followed by one Pock-Chambolle pass (skipped if ``pc_alpha`` is None)."""
    info = ruiz_equilibrate(k, ruiz_iters)
    if pc_alpha is not None:
        info = info.compose(pock_chambolle_scale(k.scaled(info.row_scale, info.col_scale), pc_alpha))
    return info


def apply_scaling(problem: LpProblem, info: ScalingInfo) -> LpProblem:
    """Return the rescaled problem; infinite bounds stay infinite."""
    m1 = problem.m1
    if info.row_scale.shape[0] != problem.m or info.col_scale.shape[0] != problem.n:
        raise ValueError("scaling dimensions do not match the problem")
    r_a, r_g = info.row_scale[:m1], info.row_scale[m1:]
    d = info.col_scale
    return problem.replace(
        a=problem.a.scaled(r_a, d),
        g=problem.g.scaled(r_g, d),
        c=problem.c * d,
        b=problem.b * r_a,
        h=problem.h * r_g,
        l=problem.l / d,
        u=problem.u / d,
    )


def unapply_scaling(problem: LpProblem, info: ScalingInfo) -> LpProblem:
    """Inverse of :func:`apply_scaling`."""
    return apply_scaling(problem, info.inverse())
