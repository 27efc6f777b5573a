"""Assembly, solution and error measurement for the spectral Galerkin system.

The discrete problem lives on the unit ball: find ``u_n = sum alpha_k psi_k``
with

    sum_k alpha_k Q[(det J A~) grad psi_k . grad psi_l + det J gamma psi_k psi_l]
        = Q[det J f psi_l]

for every trial function ``psi_l``, where ``Q`` is the disk or ball rule.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .ballbasis import BasisTable, dim_pi, psi_table
from .domainmap import DomainMap, transformed_coeffs
from .quadrature import ball_rule, disk_rule

__all__ = [
    "EllipticProblem",
    "GalerkinSystem",
    "AssemblyError",
    "default_quad",
    "quad_rule",
    "assemble",
    "solve",
    "evaluate_solution",
    "error_grid",
    "condition_number",
    "max_grid_error",
]

log = logging.getLogger(__name__)


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class EllipticProblem:
    """``-div(A grad u) + gamma u = f`` on ``map(B)`` with ``u = 0`` on the boundary.

    Coefficient callables take ``(P, d)`` arrays of physical points.
    ``coeff_a=None`` means the identity matrix.
    """

    map: DomainMap
    gamma: Callable
    rhs_f: Callable
    coeff_a: Optional[Callable] = None
    true_solution: Optional[Callable] = None
    name: str = "custom"

    @property
    def dim(self) -> int:
        return self.map.dim


@dataclass
class GalerkinSystem:
    degree: int
    dim: int
    matrix: np.ndarray
    load: np.ndarray
    quad_q: int
    domain_map: DomainMap = field(repr=False)
    coeffs: Optional[np.ndarray] = None
    symmetry_defect: float = 0.0
    positive_definite: Optional[bool] = None

    @property
    def size(self) -> int:
        return len(self.load)


def default_quad(n, d):
    """Quadrature order used when none is given: max(n+2, 10) on the disk, n+2 on the ball."""
    return max(n + 2, 10) if d == 2 else n + 2


def quad_rule(d, q):
    if d == 2:
        return disk_rule(q)
    if d == 3:
        return ball_rule(q)
    raise ValueError(f"dimension must be 2 or 3, got {d}")


def assemble(problem, n, q=None):
    """Build the Galerkin matrix and load vector for degree ``n``."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    d = problem.dim
    q = default_quad(n, d) if q is None or q == "auto" else int(q)
    if q < 1:
        raise ValueError(f"quadrature order must be positive, got {q}")
    rule = quad_rule(d, q)
    x = rule.nodes
    w = rule.weights

    coeffs = transformed_coeffs(problem.map, problem.coeff_a, problem.gamma, problem.rhs_f)
    A = coeffs.a_tilde_scaled(x)
    gam = coeffs.gamma_scaled(x)
    f = coeffs.f_scaled(x)
    for label, arr in (("coefficient matrix", A), ("gamma", gam), ("right-hand side", f)):
        bad = ~np.isfinite(arr.reshape(len(x), -1)).all(axis=1)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise AssemblyError(f"non-finite {label} at quadrature node {i}: {x[i]}")

    table = BasisTable.build(n, d, x)
    V, G = table.values, table.gradients
    N = V.shape[1]
    # flux[p, k, i] = sum_j A[p, i, j] dpsi_k/dx_j
    flux = np.einsum("pij,pkj->pki", A, G) * w[:, None, None]
    M = np.transpose(flux, (1, 0, 2)).reshape(N, -1) @ np.transpose(G, (1, 0, 2)).reshape(N, -1).T
    M += (V * (w * gam)[:, None]).T @ V
    b = V.T @ (w * f)
    if not (np.isfinite(M).all() and np.isfinite(b).all()):
        raise AssemblyError(f"non-finite entries in the degree-{n} system")

    scale = np.max(np.abs(M)) or 1.0
    defect = float(np.max(np.abs(M - M.T)) / scale)
    if defect > 1e-12:
        log.warning("degree %d: Galerkin matrix asymmetry %.2e before symmetrization", n, defect)
    M = 0.5 * (M + M.T)
    return GalerkinSystem(n, d, M, b, q, problem.map, symmetry_defect=defect)


def solve(system):
    """Solve the system by Cholesky; falls back to a symmetric-indefinite solve.

    Stores and returns the coefficient vector.
    """
    M, b = system.matrix, system.load
    try:
        alpha = scipy.linalg.cho_solve(scipy.linalg.cho_factor(M), b)
        system.positive_definite = True
    except scipy.linalg.LinAlgError:
        log.warning("degree %d: Galerkin matrix is not numerically positive definite", system.degree)
        alpha = scipy.linalg.solve(M, b, assume_a="sym")
        system.positive_definite = False
    bnorm = np.max(np.abs(b))
    if bnorm > 0:
        resid = np.max(np.abs(M @ alpha - b)) / bnorm
        if resid > 1e-10:
            log.warning("degree %d: relative residual %.2e", system.degree, resid)
    system.coeffs = alpha
    return alpha


def evaluate_solution(system, points, frame="ball"):
    """Evaluate ``u_n`` at points in the ball frame, or at physical points (``frame='omega'``)."""
    if system.coeffs is None:
        raise ValueError("system has not been solved")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if frame == "omega":
        inv = system.domain_map.psi_inverse
        if inv is None:
            raise ValueError("map has no inverse; pass ball-frame points instead")
        pts = inv(pts)
    elif frame != "ball":
        raise ValueError(f"frame must be 'ball' or 'omega', got {frame!r}")
    r2 = np.sum(pts * pts, axis=1)
    outside = r2 > 1.0 + 1e-12
    if outside.any():
        i = int(np.flatnonzero(outside)[0])
        raise ValueError(f"point {pts[i]} lies outside the closed unit ball")
    vals, _ = psi_table(system.degree, system.dim, pts)
    return vals @ system.coeffs


def error_grid(dim):
    """Ball-frame points on which maximum errors are reported.

    d=2: radii i/10 (i=0..10) by angles j pi/10 (j=1..20), centre once (201 points).
    d=3: the 20 x 40 x 20 spherical lattice with radii and polar angles in
    steps of 1/21 (16000 points).
    """
    if dim == 2:
        r = np.arange(1, 11) / 10.0
        th = np.arange(1, 21) * np.pi / 10.0
        R, T = np.meshgrid(r, th, indexing="ij")
        ring = np.column_stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()])
        return np.vstack([np.zeros((1, 2)), ring])
    if dim == 3:
        i = np.arange(1, 21)
        j = np.arange(1, 41)
        k = np.arange(1, 21)
        I, J, K = np.meshgrid(i, j, k, indexing="ij")
        r = I / 21.0
        pol = K * np.pi / 21.0
        az = 2.0 * J * np.pi / 20.0
        return np.column_stack([
            (r * np.sin(pol) * np.cos(az)).ravel(),
            (r * np.sin(pol) * np.sin(az)).ravel(),
            (r * np.cos(pol)).ravel(),
        ])
    raise ValueError(f"dimension must be 2 or 3, got {dim}")


def condition_number(system_or_matrix):
    """2-norm condition number from the singular values."""
    M = getattr(system_or_matrix, "matrix", system_or_matrix)
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    return float(s[0] / s[-1])


def max_grid_error(system, problem, grid=None):
    """Maximum of ``|u - u_n|`` over the error grid (ball frame)."""
    if problem.true_solution is None:
        raise ValueError(f"problem {problem.name!r} has no true solution")
    x = error_grid(system.dim) if grid is None else grid
    exact = problem.true_solution(problem.map.phi(x))
    return float(np.max(np.abs(exact - evaluate_solution(system, x))))
