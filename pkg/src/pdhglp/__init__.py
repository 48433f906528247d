"""Restarted primal-dual hybrid gradient solver for linear programs."""

from .kkt import Iterate, ResidualReport, check_termination, compute_residuals, derive_lambda, kkt_omega
from .model import BoundClass, LpProblem, classify_bounds, stack_k
from .mps import MpsError, parse_mps, read_mps, save_mps, write_mps
from .scaling import ScalingInfo, apply_scaling, pock_chambolle_scale, ruiz_equilibrate, unapply_scaling
from .solver import NumericalError, SolveResult, SolverParams, Status, solve
from .sparse import SparseMatrix

__version__ = "0.1.0"

__all__ = [
    "BoundClass", "Iterate", "LpProblem", "MpsError", "NumericalError", "ResidualReport",
    "ScalingInfo", "SolveResult", "SolverParams", "SparseMatrix", "Status",
    "apply_scaling", "check_termination", "classify_bounds", "compute_residuals",
    "derive_lambda", "kkt_omega", "parse_mps", "pock_chambolle_scale", "read_mps",
    "ruiz_equilibrate", "save_mps", "solve", "stack_k", "unapply_scaling", "write_mps",
]
