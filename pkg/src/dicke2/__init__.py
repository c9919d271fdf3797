"""Semiclassical two-species open Dicke model laboratory.

Mean-field dynamics of two atomic ensembles coupled to one lossy cavity
mode: adaptive integration of the equations of motion, steady-state
enumeration and Newton solving, linear stability classification, and
coupling-plane phase diagrams.
"""

__version__ = "0.1.0"

from .dynamics import (
    IntegrationError,
    IntegratorConfig,
    SettleResult,
    Trajectory,
    drift_report,
    integrate,
    settle,
)
from .model import (
    STATE_LABELS,
    DriveParams,
    ModelParams,
    Phase,
    SystemState,
    coupling_from_pump,
    eom_rhs,
    lambda_combined,
    spin_norm_residual,
    trivial_fixed_point,
    validate_params,
)
from .phasescan import (
    GridSpec,
    ScanCell,
    ScanResult,
    analytic_boundary_curve,
    scan,
)
from .stability import (
    BoundaryRoots,
    Classification,
    StabilityReport,
    assess,
    boundary_value,
    eigenvalues,
    jacobian,
    jacobian_fd,
    omega_pm,
)
from .steadystate import (
    CriticalCoupling,
    FixedPointSolution,
    NewtonError,
    critical_lambda,
    critical_lambda1_given_j2z,
    partial_superradiant_jz,
    solve_superradiant,
    steady_residual,
)

__all__ = [
    "__version__",
    "STATE_LABELS",
    "BoundaryRoots",
    "Classification",
    "CriticalCoupling",
    "DriveParams",
    "FixedPointSolution",
    "GridSpec",
    "IntegrationError",
    "IntegratorConfig",
    "ModelParams",
    "NewtonError",
    "Phase",
    "ScanCell",
    "ScanResult",
    "SettleResult",
    "StabilityReport",
    "SystemState",
    "Trajectory",
    "analytic_boundary_curve",
    "assess",
    "boundary_value",
    "coupling_from_pump",
    "critical_lambda",
    "critical_lambda1_given_j2z",
    "drift_report",
    "eigenvalues",
    "eom_rhs",
    "integrate",
    "jacobian",
    "jacobian_fd",
    "lambda_combined",
    "omega_pm",
    "partial_superradiant_jz",
    "scan",
    "settle",
    "solve_superradiant",
    "spin_norm_residual",
    "steady_residual",
    "trivial_fixed_point",
    "validate_params",
]
