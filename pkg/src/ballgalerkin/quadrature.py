"""Product quadrature rules on the unit disk and unit ball."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .orthopoly import gauss_jacobi_02, gauss_legendre

__all__ = ["BallRule", "disk_rule", "ball_rule", "integrate", "QuadratureError"]


class QuadratureError(ValueError):
    """An integrand could not be evaluated at some quadrature node."""


@dataclass(frozen=True)
class BallRule:
    """Nodes (Cartesian, strictly interior) and positive weights on the unit ball.

    ``spherical`` holds the polar-form coordinates of each node:
    ``(r, theta)`` for d=2 and ``(r, azimuth, polar)`` for d=3.
    """

    dim: int
    q: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    spherical: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.nodes, self.weights, self.spherical):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.weights)


@lru_cache(maxsize=64)
def disk_rule(q):
    """Gauss-Legendre in r (q+1 points on [0,1]) times trapezoid in theta (2q+1 points).

    Exact for all polynomials of total degree <= 2q.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    r, omega = gauss_legendre(q + 1).rescaled(0.0, 1.0)
    M = 2 * q + 1
    theta = 2.0 * np.pi * np.arange(M) / M
    R, T = np.meshgrid(r, theta, indexing="ij")
    W = (omega * r)[:, None] * np.full(M, 2.0 * np.pi / M)[None, :]
    R, T, W = R.ravel(), T.ravel(), W.ravel()
    nodes = np.column_stack([R * np.cos(T), R * np.sin(T)])
    return BallRule(2, q, nodes, W, 2 * q, np.column_stack([R, T]))


@lru_cache(maxsize=64)
def ball_rule(q):
    """Trapezoid in azimuth (2q points), Gauss-Legendre in cos(polar) and
    ``(1+t)^2``-Gauss in r (q points each).

    Exact for polynomials of total degree <= 2q - 1.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    azim = np.pi * np.arange(1, 2 * q + 1) / q
    w_azim = np.full(2 * q, np.pi / q)
    gl = gauss_legendre(q)
    polar = np.arccos(gl.nodes)
    rad_rule, nu = gauss_jacobi_02(q)
    r = 0.5 * (rad_rule.nodes + 1.0)

    A, Pl, R = np.meshgrid(azim, polar, r, indexing="ij")
    W = (w_azim[:, None, None] * gl.weights[None, :, None] * nu[None, None, :]).ravel()
    A, Pl, R = A.ravel(), Pl.ravel(), R.ravel()
    sp = np.sin(Pl)
    nodes = np.column_stack([R * sp * np.cos(A), R * sp * np.sin(A), R * np.cos(Pl)])
    return BallRule(3, q, nodes, W, 2 * q - 1, np.column_stack([R, A, Pl]))


def integrate(rule, g):
    """Return ``sum_i w_i g(x_i)``.

    ``g`` is called once on the full ``(P, d)`` node array and must return
    ``P`` values. Non-finite values raise ``QuadratureError`` naming the node.
    """
    try:
        vals = np.asarray(g(rule.nodes), dtype=float)
    except Exception as exc:
        raise QuadratureError(f"integrand failed on the {rule.dim}-D rule q={rule.q}: {exc}") from exc
    vals = np.broadcast_to(vals, rule.weights.shape)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        i = bad[0]
        raise QuadratureError(f"non-finite integrand value at node {i}: {rule.nodes[i]}")
    return float(np.dot(rule.weights, vals))
