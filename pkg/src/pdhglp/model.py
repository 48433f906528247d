"""LP problem representation in the four-block standard form.

    min  c'x + offset
    s.t. A x  = b
         G x >= h
         l <= x <= u
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .sparse import SparseMatrix


class BoundClass(enum.IntEnum):
    """Per-variable bound pattern; determines the sign set of its reduced cost."""

    FREE = 0  # reduced cost must be 0
    UPPER_ONLY = 1  # reduced cost <= 0
    LOWER_ONLY = 2  # reduced cost >= 0
    BOXED = 3  # any sign


@dataclass(frozen=True, eq=False)
class LpProblem:
    a: SparseMatrix
    g: SparseMatrix
    c: np.ndarray
    b: np.ndarray
    h: np.ndarray
    l: np.ndarray
    u: np.ndarray
    objective_offset: float = 0.0
    maximize: bool = False
    name: str = "lp"
    row_names: tuple[str, ...] | None = field(default=None, repr=False)
    col_names: tuple[str, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        for attr in ("c", "b", "h", "l", "u"):
            arr = np.array(getattr(self, attr), dtype=np.float64).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)
        for attr in ("a", "g"):
            mat = getattr(self, attr)
            if not isinstance(mat, SparseMatrix):
                object.__setattr__(self, attr, SparseMatrix(mat))
        n = self.c.shape[0]
        if self.a.n_cols != n or self.g.n_cols != n:
            raise ValueError(f"matrix column counts {self.a.n_cols}, {self.g.n_cols} do not match len(c)={n}")
        if self.b.shape[0] != self.a.n_rows:
            raise ValueError("len(b) must equal the number of equality rows")
        if self.h.shape[0] != self.g.n_rows:
            raise ValueError("len(h) must equal the number of inequality rows")
        if self.l.shape[0] != n or self.u.shape[0] != n:
            raise ValueError("bound vectors must have length n")
        for attr in ("c", "b", "h"):
            if not np.all(np.isfinite(getattr(self, attr))):
                raise ValueError(f"{attr} must be finite")
        if np.isnan(self.l).any() or np.isnan(self.u).any():
            raise ValueError("bounds must not be NaN")
        if np.any(self.l == np.inf) or np.any(self.u == -np.inf):
            raise ValueError("lower bounds cannot be +inf and upper bounds cannot be -inf")
        if np.any(self.l > self.u):
            bad = int(np.flatnonzero(self.l > self.u)[0])
            raise ValueError(f"l > u for variable {bad}")
        if not np.isfinite(self.objective_offset):
            raise ValueError("objective_offset must be finite")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m1(self) -> int:
        return self.a.n_rows

    @property
    def m2(self) -> int:
        return self.g.n_rows

    @property
    def m(self) -> int:
        return self.m1 + self.m2

    @cached_property
    def k(self) -> SparseMatrix:
        return stack_k(self)[0]

    @cached_property
    def q(self) -> np.ndarray:
        return stack_k(self)[1]

    @cached_property
    def bound_classes(self) -> np.ndarray:
        return classify_bounds(self)

    def replace(self, **changes) -> "LpProblem":
        fields = {
            "a": self.a, "g": self.g, "c": self.c, "b": self.b, "h": self.h,
            "l": self.l, "u": self.u, "objective_offset": self.objective_offset,
            "maximize": self.maximize, "name": self.name,
            "row_names": self.row_names, "col_names": self.col_names,
        }
        fields.update(changes)
        return LpProblem(**fields)

    def user_objective(self, value: float) -> float:
        """Map an internal (minimization) objective to the model's own sense."""
        return -value if self.maximize else value

    def equals(self, other: "LpProblem") -> bool:
        """Field-by-field equality of the numerical data."""
        return (
            self.a == other.a
            and self.g == other.g
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("c", "b", "h", "l", "u")
            )
            and self.objective_offset == other.objective_offset
            and self.maximize == other.maximize
        )


def stack_k(problem: LpProblem) -> tuple[SparseMatrix, np.ndarray]:
    """Stack the constraint blocks as K = [A; G] and q = (b, h)."""
    k = problem.a.vstack(problem.g)
    q = np.concatenate([problem.b, problem.h])
    return k, q


def classify_bounds(problem: LpProblem) -> np.ndarray:
    """Return a BoundClass code per variable (as an int8 array)."""
    has_l = np.isfinite(problem.l)
    has_u = np.isfinite(problem.u)
    return (2 * has_l.astype(np.int8) + has_u.astype(np.int8)).astype(np.int8)
