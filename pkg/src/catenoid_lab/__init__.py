"""Numerical verification lab for the free-boundary catenoid family in
hyperbolic space (parameter a > 1/2)."""

__version__ = "0.1.0"

from .asymptotics import AsymptoticConstants, compute_constants, endpoint_checks, gamma_quarter
from .boundary_geometry import CatenoidGeometry, GeometryDerivatives, geometry_derivatives, phi_angle, solve_s0
from .conditions import ConditionReport, HardyReport, IndexTable, evaluate_conditions, hardy_report, index_nullity, scan_A_star
from .errors import CatenoidLabError, DomainError, NumericalFailure
from .jacobi_fields import GridFunction, RobinDefect, closed_fields, integrate_phi_a, phi_s0_closed, robin_defects, wronskian
from .profile import ParamA, ProfilePoint, eval_profile, mori_residual, potential_Wk
from .robin_spectrum import (ModeSector, SpectralReport, ambient_form_matrix, eigenvalues, picone_check,
                             quadratic_form, shooting_count)
from .tolerances import Tolerances, use_tolerances

__all__ = [
    "AsymptoticConstants", "CatenoidGeometry", "CatenoidLabError", "ConditionReport", "DomainError",
    "GeometryDerivatives", "GridFunction", "HardyReport", "IndexTable", "ModeSector", "NumericalFailure",
    "ParamA", "ProfilePoint", "RobinDefect", "SpectralReport", "Tolerances", "ambient_form_matrix",
    "closed_fields", "compute_constants", "eigenvalues", "endpoint_checks", "eval_profile",
    "evaluate_conditions", "gamma_quarter", "geometry_derivatives", "hardy_report", "index_nullity",
    "integrate_phi_a", "mori_residual", "phi_angle", "phi_s0_closed", "picone_check", "potential_Wk",
    "quadratic_form", "robin_defects", "scan_A_star", "shooting_count", "solve_s0", "use_tolerances",
    "wronskian",
]
