"""Exact shallow-water vortices and a fifth-order finite-volume solver to test them."""

__version__ = "0.1.0"

from .vortex import (  # noqa: E402
    ArctanBump,
    CosPower,
    ExpBump,
    Gaussian,
    RadialProfile,
    VortexSpec,
    calibrate_gamma,
    cell_averages,
    cos_power_antiderivative,
    depth,
    eval_cartesian,
    exact_cell_average,
    omega,
    radial_derivative,
    u_theta,
)
from .solver import FieldState, Grid, SolverInstability, simulate  # noqa: E402
from .convergence import ConvergenceReport, error_norm, observed_order, run_study  # noqa: E402
from .euler import EulerVortexField, eval_euler_cartesian  # noqa: E402

__all__ = [
    "ArctanBump",
    "CosPower",
    "ExpBump",
    "Gaussian",
    "RadialProfile",
    "VortexSpec",
    "calibrate_gamma",
    "cell_averages",
    "cos_power_antiderivative",
    "depth",
    "eval_cartesian",
    "exact_cell_average",
    "omega",
    "radial_derivative",
    "u_theta",
    "FieldState",
    "Grid",
    "SolverInstability",
    "simulate",
    "ConvergenceReport",
    "error_norm",
    "observed_order",
    "run_study",
    "EulerVortexField",
    "eval_euler_cartesian",
]
