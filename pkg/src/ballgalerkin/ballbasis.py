"""Orthonormal polynomial bases on the unit disk and unit ball.

Disk (d=2): ridge polynomials ``U_n(x cos kh + y sin kh) / sqrt(pi)``,
``h = pi/(n+1)``, ordered by ``(n, k)``.

Ball (d=3): ``c_{m,j} p_j(2|x|^2 - 1) |x|^l S_{beta,l}(x/|x|)`` with
``l = m - 2j``, ordered by ``(m, j, beta)``. The factor ``|x|^l S`` is a
solid harmonic and is evaluated as a Cartesian polynomial, so values and
gradients are smooth at the origin and on the polar axis.

Trial functions are ``psi = (1 - |x|^2) phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import gammaln

from .orthopoly import assoc_legendre, chebyshev_u, jacobi_normalized

__all__ = [
    "BasisIndex",
    "BasisEval",
    "BasisTable",
    "dim_pi",
    "basis_indices",
    "ridge_phi",
    "ball_phi",
    "trial_psi",
    "sph_harm",
    "sph_harm_norm",
    "ball_radial_norm",
    "phi_table",
    "psi_table",
]


@dataclass(frozen=True)
class BasisIndex:
    """One basis function: dimension, 0-based lexicographic position, degree params.

    ``params`` is ``(n, k)`` for d=2 and ``(m, j, beta)`` for d=3.
    """

    dim: int
    position: int
    params: tuple

    @property
    def degree(self) -> int:
        return self.params[0]


@dataclass(frozen=True)
class BasisEval:
    value: float
    gradient: np.ndarray


def dim_pi(n, d):
    """Dimension of the polynomials of total degree <= n in d variables."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if d == 2:
        return (n + 1) * (n + 2) // 2
    if d == 3:
        return comb(n + 3, 3)
    raise ValueError(f"dimension must be 2 or 3, got {d}")


@lru_cache(maxsize=None)
def basis_indices(n, d):
    """All basis indices of degree <= n in lexicographic order."""
    out = []
    if d == 2:
        for deg in range(n + 1):
            for k in range(deg + 1):
                out.append(BasisIndex(2, len(out), (deg, k)))
    elif d == 3:
        for m in range(n + 1):
            for j in range(m // 2 + 1):
                for beta in range(2 * (m - 2 * j) + 1):
                    out.append(BasisIndex(3, len(out), (m, j, beta)))
    else:
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    return tuple(out)


# -- normalizers -------------------------------------------------------------

def sph_harm_norm(beta, k):
    """Constant making ``S_{beta,k}`` orthonormal on the unit sphere."""
    mu = _sh_order(beta)
    if mu == 0:
        return np.sqrt((2 * k + 1) / (4 * np.pi))
    return np.sqrt((2 * k + 1) / (2 * np.pi) * np.exp(gammaln(k - mu + 1) - gammaln(k + mu + 1)))


def ball_radial_norm(m, j):
    """Constant ``c_{m,j} = 2**(5/4 + m/2 - j)`` of the ball basis."""
    return 2.0 ** (1.25 + 0.5 * m - j)


def _sh_order(beta):
    # beta even -> cos(beta/2 phi), beta odd -> sin((beta+1)/2 phi)
    return beta // 2 if beta % 2 == 0 else (beta + 1) // 2


def sph_harm(beta, k, phi, theta):
    """Real spherical harmonic ``S_{beta,k}`` at azimuth ``phi``, polar angle ``theta``."""
    if not 0 <= beta <= 2 * k:
        raise ValueError(f"need 0 <= beta <= 2k, got beta={beta}, k={k}")
    mu = _sh_order(beta)
    phi = np.asarray(phi, dtype=float)
    trig = np.cos(mu * phi) if beta % 2 == 0 else np.sin(mu * phi)
    return (sph_harm_norm(beta, k) * trig * assoc_legendre(k, mu, np.cos(theta)))[()]


# -- vectorized tables -------------------------------------------------------

def _disk_phi(n, pts):
    P = pts.shape[0]
    N = dim_pi(n, 2)
    vals = np.empty((P, N))
    grads = np.empty((P, N, 2))
    inv_sqrt_pi = 1.0 / np.sqrt(np.pi)
    col = 0
    for deg in range(n + 1):
        ang = np.arange(deg + 1) * np.pi / (deg + 1)
        c, s = np.cos(ang), np.sin(ang)
        t = pts[:, :1] * c + pts[:, 1:2] * s
        u, du = chebyshev_u(deg, t)
        sl = slice(col, col + deg + 1)
        vals[:, sl] = inv_sqrt_pi * u
        grads[:, sl, 0] = inv_sqrt_pi * du * c
        grads[:, sl, 1] = inv_sqrt_pi * du * s
        col += deg + 1
    return vals, grads


def _solid_legendre(lmax, z, w):
    """``r^{l-mu} d^mu P_l(z/r)`` as polynomials in (z, w=r^2), with partials.

    Returns dicts keyed by (l, mu) of (value, d/dz, d/dw).
    """
    out = {}
    zero = np.zeros_like(z)
    for mu in range(lmax + 1):
        dfact = float(np.prod(np.arange(1.0, 2.0 * mu, 2.0))) if mu > 0 else 1.0
        p_prev = (zero, zero, zero)
        p = (np.full_like(z, dfact), zero, zero)
        out[(mu, mu)] = p
        for l in range(mu + 1, lmax + 1):
            a = 2.0 * l - 1.0
            b = l + mu - 1.0
            den = l - mu
            v = (a * z * p[0] - b * w * p_prev[0]) / den
            vz = (a * (p[0] + z * p[1]) - b * w * p_prev[1]) / den
            vw = (a * z * p[2] - b * (p_prev[0] + w * p_prev[2])) / den
            p_prev, p = p, (v, vz, vw)
            out[(l, mu)] = p
    return out


def _ball_phi(n, pts):
    P = pts.shape[0]
    N = dim_pi(n, 3)
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    w = x * x + y * y + z * z
    vals = np.empty((P, N))
    grads = np.empty((P, N, 3))

    leg = _solid_legendre(n, z, w)
    # (x+iy)^mu and mu (x+iy)^(mu-1)
    xy = x + 1j * y
    pw = [np.ones_like(xy)]
    for _ in range(n):
        pw.append(pw[-1] * xy)

    harm = {}
    for l in range(n + 1):
        for beta in range(2 * l + 1):
            mu = _sh_order(beta)
            cos_part = beta % 2 == 0
            base = pw[mu]
            dbase = mu * pw[mu - 1] if mu > 0 else np.zeros_like(xy)
            if cos_part:
                e, ex, ey = base.real, dbase.real, -dbase.imag
            else:
                e, ex, ey = base.imag, dbase.imag, dbase.real
            pv, pz, pwd = leg[(l, mu)]
            c = sph_harm_norm(beta, l)
            hv = c * pv * e
            hg = np.stack([
                c * (2.0 * x * pwd * e + pv * ex),
                c * (2.0 * y * pwd * e + pv * ey),
                c * (pz + 2.0 * z * pwd) * e,
            ], axis=-1)
            harm[(l, beta)] = (hv, hg)

    radial = {}
    t = 2.0 * w - 1.0
    col = 0
    for m in range(n + 1):
        for j in range(m // 2 + 1):
            l = m - 2 * j
            if (l, j) not in radial:
                p, dp = jacobi_normalized(j, l + 0.5, t)
                radial[(l, j)] = (p, dp)
            p, dp = radial[(l, j)]
            c = ball_radial_norm(m, j)
            rv = c * p
            rg = (4.0 * c * dp)[:, None] * pts
            for beta in range(2 * l + 1):
                hv, hg = harm[(l, beta)]
                vals[:, col] = rv * hv
                grads[:, col] = rg * hv[:, None] + rv[:, None] * hg
                col += 1
    return vals, grads


def _as_points(points, d):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ValueError(f"expected points of shape (P, {d}), got {np.shape(points)}")
    return pts


def phi_table(n, d, points):
    """Values ``(P, N)`` and Cartesian gradients ``(P, N, d)`` of all phi of degree <= n."""
    pts = _as_points(points, d)
    if d == 2:
        return _disk_phi(n, pts)
    if d == 3:
        return _ball_phi(n, pts)
    raise ValueError(f"dimension must be 2 or 3, got {d}")


def psi_table(n, d, points):
    """Values and gradients of the trial functions ``(1 - |x|^2) phi``."""
    pts = _as_points(points, d)
    vals, grads = phi_table(n, d, pts)
    bubble = 1.0 - np.sum(pts * pts, axis=1)
    pvals = bubble[:, None] * vals
    pgrads = bubble[:, None, None] * grads - 2.0 * vals[:, :, None] * pts[:, None, :]
    return pvals, pgrads


@dataclass(frozen=True)
class BasisTable:
    """Trial-function values and gradients cached on a fixed point set."""

    dim: int
    degree: int
    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray

    @classmethod
    def build(cls, n, d, points):
        pts = _as_points(points, d)
        vals, grads = psi_table(n, d, pts)
        for arr in (pts, vals, grads):
            arr.setflags(write=False)
        return cls(d, n, pts, vals, grads)


def _single(idx, x, table_fn):
    vals, grads = table_fn(idx.degree, idx.dim, x)
    pos = idx.position
    return BasisEval(float(vals[0, pos]), grads[0, pos].copy())


def _check_in_ball(x):
    x = np.asarray(x, dtype=float)
    if np.dot(x, x) > 1.0 + 1e-14:
        raise ValueError(f"point {x} lies outside the closed unit ball")
    return x


def _position(idx):
    # position among indices of degree <= idx.degree is fixed by the params
    for cand in basis_indices(idx.degree, idx.dim):
        if cand.params == idx.params:
            return cand
    raise ValueError(f"invalid basis params {idx.params} for d={idx.dim}")


def ridge_phi(idx, x):
    """Disk basis function ``phi_{n,k}`` and its gradient at one point."""
    if idx.dim != 2:
        raise ValueError("ridge_phi needs a 2-D index")
    return _single(_position(idx), _check_in_ball(x), phi_table)


def ball_phi(idx, x):
    """Ball basis function ``phi_{m,j,beta}`` and its gradient at one point."""
    if idx.dim != 3:
        raise ValueError("ball_phi needs a 3-D index")
    return _single(_position(idx), _check_in_ball(x), phi_table)


def trial_psi(idx, x):
    """Trial function ``(1 - |x|^2) phi`` and its gradient at one point."""
    return _single(_position(idx), _check_in_ball(x), psi_table)
