"""Maps from the unit ball onto a physical domain and the pulled-back coefficients.

All callables here are vectorized: they take an ``(P, d)`` array of points
and return ``(P, ...)`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import hyperdual as hd

__all__ = [
    "DomainMap",
    "TransformedCoeffs",
    "SingularJacobianError",
    "builtin_map",
    "transformed_coeffs",
    "ellipticity_report",
    "inverse_small",
    "BUILTIN_MAPS",
    "planar_preimage",
    "quadratic_preimage",
]

_DET_TOL = 1e-12
_FD_STEP = 1e-6


class SingularJacobianError(ValueError):
    pass


def _pts(x, d):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[-1] != d:
        raise ValueError(f"expected points with {d} coordinates, got shape {x.shape}")
    return x


def _fd_jacobian(phi, d):
    def jac(x):
        x = _pts(x, d)
        cols = []
        for e in np.eye(d):
            cols.append((phi(x + _FD_STEP * e) - phi(x - _FD_STEP * e)) / (2 * _FD_STEP))
        return np.stack(cols, axis=-1)

    return jac


@dataclass(frozen=True)
class DomainMap:
    """A smooth bijection ``phi`` of the closed unit ball onto a domain.

    ``jacobian`` returns ``D phi`` with shape ``(P, d, d)``; ``det_j`` its
    determinant. ``psi_inverse`` is optional.
    """

    dim: int
    phi: Callable
    jacobian: Callable
    det_j: Callable
    psi_inverse: Optional[Callable] = None
    name: str = "custom"

    @classmethod
    def from_function(cls, phi, dim, jacobian=None, psi_inverse=None, name="custom"):
        """Wrap a user map; without ``jacobian`` central differences (step 1e-6) are used.

        Finite-difference Jacobians cap accuracy near 1e-10.
        """
        if jacobian is None:
            jacobian = _fd_jacobian(phi, dim)

        def det_j(x):
            return np.linalg.det(jacobian(_pts(x, dim)))

        return cls(dim, phi, jacobian, det_j, psi_inverse, name)

    def check(self, points, roundtrip_tol=1e-12):
        """Verify det J > 0 at ``points`` and, if available, the inverse round trip."""
        pts = _pts(points, self.dim)
        det = self.det_j(pts)
        if np.any(det <= 0):
            i = int(np.argmin(det))
            raise SingularJacobianError(f"det J = {det[i]:.3e} <= 0 at {pts[i]}")
        if self.psi_inverse is not None:
            err = np.max(np.abs(self.psi_inverse(self.phi(pts)) - pts))
            if err > roundtrip_tol:
                raise ValueError(f"inverse map round trip error {err:.3e} exceeds {roundtrip_tol}")


def _identity(d):
    def phi(x):
        return _pts(x, d).copy()

    def jac(x):
        x = _pts(x, d)
        return np.broadcast_to(np.eye(d), (len(x), d, d)).copy()

    def det(x):
        return np.ones(len(_pts(x, d)))

    return DomainMap(d, phi, jac, det, phi, name=f"identity{d}")


def quadratic_preimage(v, c):
    """Root ``w`` of ``c w^2 + 2 w = v`` near zero, i.e. ``(sqrt(1 + c v) - 1) / c``.

    Written without cancellation; accepts arrays or hyper-duals.
    """
    return v / (hd.sqrt(1.0 + c * v) + 1.0)


def planar_preimage(s, t, a):
    """Inverse of the planar quadratic map; accepts arrays or hyper-duals."""
    x = quadratic_preimage(s + t, a)
    return x, t - x


def _check_param(name, v):
    if not 0.0 < v < 1.0:
        raise ValueError(f"parameter {name} must lie in (0, 1), got {v}")


def _planar_quadratic(a):
    """``s = x - y + a x^2``, ``t = x + y``."""
    _check_param("a", a)

    def phi(x):
        x = _pts(x, 2)
        X, Y = x[:, 0], x[:, 1]
        return np.column_stack([X - Y + a * X * X, X + Y])

    def jac(x):
        x = _pts(x, 2)
        J = np.empty((len(x), 2, 2))
        J[:, 0, 0] = 1.0 + 2.0 * a * x[:, 0]
        J[:, 0, 1] = -1.0
        J[:, 1, 0] = 1.0
        J[:, 1, 1] = 1.0
        return J

    def det(x):
        return 2.0 * (1.0 + a * _pts(x, 2)[:, 0])

    def psi(s):
        s = _pts(s, 2)
        return np.column_stack(planar_preimage(s[:, 0], s[:, 1], a))

    return DomainMap(2, phi, jac, det, psi, name=f"planar_quadratic(a={a})")


def _ball_quadratic(a, b):
    """Planar map in (x, y) plus ``u = 2z + b z^2``."""
    _check_param("a", a)
    _check_param("b", b)
    planar = _planar_quadratic(a)

    def phi(x):
        x = _pts(x, 3)
        Z = x[:, 2]
        return np.column_stack([planar.phi(x[:, :2]), 2.0 * Z + b * Z * Z])

    def jac(x):
        x = _pts(x, 3)
        J = np.zeros((len(x), 3, 3))
        J[:, :2, :2] = planar.jacobian(x[:, :2])
        J[:, 2, 2] = 2.0 + 2.0 * b * x[:, 2]
        return J

    def det(x):
        x = _pts(x, 3)
        return 4.0 * (1.0 + a * x[:, 0]) * (1.0 + b * x[:, 2])

    def psi(s):
        s = _pts(s, 3)
        return np.column_stack([planar.psi_inverse(s[:, :2]), quadratic_preimage(s[:, 2], b)])

    return DomainMap(3, phi, jac, det, psi, name=f"ball_quadratic(a={a}, b={b})")


BUILTIN_MAPS = {
    "identity2": lambda: _identity(2),
    "identity3": lambda: _identity(3),
    "planar_quadratic": _planar_quadratic,
    "ball_quadratic": _ball_quadratic,
}


def builtin_map(name, *params):
    """Construct one of the closed-form maps by name."""
    try:
        factory = BUILTIN_MAPS[name]
    except KeyError:
        raise ValueError(f"unknown map {name!r}; available: {', '.join(BUILTIN_MAPS)}") from None
    return factory(*params)


def inverse_small(J):
    """Closed-form inverse and determinant of a stack of 2x2 or 3x3 matrices."""
    d = J.shape[-1]
    if d == 2:
        a, b, c, e = J[..., 0, 0], J[..., 0, 1], J[..., 1, 0], J[..., 1, 1]
        det = a * e - b * c
        adj = np.stack([np.stack([e, -b], -1), np.stack([-c, a], -1)], -2)
    elif d == 3:
        # rows of the adjugate are cross products of the columns
        c0, c1, c2 = J[..., :, 0], J[..., :, 1], J[..., :, 2]
        adj = np.stack([np.cross(c1, c2), np.cross(c2, c0), np.cross(c0, c1)], -2)
        det = np.einsum("...i,...i->...", c0, adj[..., 0, :])
    else:
        raise ValueError(f"only 2x2 and 3x3 supported, got {d}x{d}")
    with np.errstate(divide="ignore", invalid="ignore"):
        return adj / det[..., None, None], det


@dataclass(frozen=True)
class TransformedCoeffs:
    """Pulled-back coefficients on the ball, each already scaled by det J."""

    a_tilde_scaled: Callable
    gamma_scaled: Callable
    f_scaled: Callable


def _checked_inverse(dmap, x):
    J = dmap.jacobian(x)
    K, det = inverse_small(J)
    small = np.abs(det) < _DET_TOL
    if np.any(small):
        i = int(np.flatnonzero(small)[0])
        raise SingularJacobianError(f"|det J| = {abs(det[i]):.3e} at {x[i]}")
    return K, det


def _matrix_field(coeff_a, s, d):
    if coeff_a is None:
        return np.broadcast_to(np.eye(d), (len(s), d, d))
    A = np.asarray(coeff_a(s), dtype=float)
    return np.broadcast_to(A, (len(s), d, d))


def transformed_coeffs(dmap, coeff_a, gamma, rhs_f):
    """Pull the problem ``-div(A grad u) + gamma u = f`` back to the ball.

    ``coeff_a`` may be ``None`` for the identity matrix. Returns callables
    for ``det(J) K A K^T``, ``det(J) gamma(phi(x))`` and ``det(J) f(phi(x))``
    with ``K = J^{-1}``.
    """
    d = dmap.dim

    def a_tilde_scaled(x):
        x = _pts(x, d)
        K, det = _checked_inverse(dmap, x)
        A = _matrix_field(coeff_a, dmap.phi(x), d)
        At = K @ A @ np.swapaxes(K, -1, -2)
        At = 0.5 * (At + np.swapaxes(At, -1, -2))
        return det[:, None, None] * At

    def _scaled(fn):
        def scaled(x):
            x = _pts(x, d)
            _, det = _checked_inverse(dmap, x)
            return det * np.broadcast_to(fn(dmap.phi(x)), det.shape)

        return scaled

    return TransformedCoeffs(a_tilde_scaled, _scaled(gamma), _scaled(rhs_f))


def ellipticity_report(dmap, coeff_a, rule, c0=None):
    """Node-level ellipticity certificate ``(lambda_star, c0_tilde)``.

    ``lambda_star`` is the minimum over quadrature nodes of the smallest
    eigenvalue of ``K^T K``; ``c0`` defaults to the minimum nodewise
    smallest eigenvalue of ``A``. This certifies the discretization only,
    not a continuum minimum.
    """
    x = rule.nodes
    K, _ = _checked_inverse(dmap, x)
    lam = np.linalg.eigvalsh(np.swapaxes(K, -1, -2) @ K)[:, 0]
    lambda_star = float(lam.min())
    if c0 is None:
        A = _matrix_field(coeff_a, dmap.phi(x), dmap.dim)
        c0 = float(np.linalg.eigvalsh(A)[:, 0].min())
    return lambda_star, c0 * lambda_star
