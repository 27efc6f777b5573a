"""Spectral Galerkin solver for elliptic Dirichlet problems on images of the unit disk and ball."""

from .ballbasis import BasisIndex, ball_phi, dim_pi, ridge_phi, sph_harm, trial_psi
from .domainmap import DomainMap, builtin_map, ellipticity_report, transformed_coeffs
from .estimator import SpectralGalerkinSolver
from .galerkin import (
    EllipticProblem,
    GalerkinSystem,
    assemble,
    condition_number,
    error_grid,
    evaluate_solution,
    solve,
)
from .problems import builtin_problem
from .quadrature import ball_rule, disk_rule, integrate

__version__ = "0.1.0"
