"""Univariate orthogonal polynomials and Gauss rules.

Chebyshev polynomials of the second kind, orthonormal Jacobi polynomials
with weight ``(1+t)**b``, associated Legendre functions (no Condon-Shortley
phase), and Gauss rules for the Legendre and ``(1+t)**2`` weights.

All evaluators accept scalars or numpy arrays for ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

__all__ = [
    "GaussRule1D",
    "chebyshev_u",
    "jacobi_normalized",
    "assoc_legendre",
    "gauss_legendre",
    "gauss_jacobi_02",
    "ConvergenceError",
]

_NEWTON_TOL = 1e-14
_NEWTON_MAXITER = 100


class ConvergenceError(RuntimeError):
    """Raised when Newton refinement of Gauss nodes fails to converge."""


def chebyshev_u(n, t):
    """Return ``(U_n(t), U_n'(t))`` via the coupled three-term recurrences.

    Exact at the endpoints, unlike the trigonometric form.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    t = np.asarray(t, dtype=float)
    u_prev, u = np.zeros_like(t), np.ones_like(t)
    du_prev, du = np.zeros_like(t), np.zeros_like(t)
    for _ in range(n):
        u_next = 2.0 * t * u - u_prev
        du_next = 2.0 * u + 2.0 * t * du - du_prev
        u_prev, u = u, u_next
        du_prev, du = du, du_next
    return u[()], du[()]


def _jacobi_norm_sq(j, b):
    # h_j for P_j^{(0,b)}: 2^{b+1} / (2j+b+1)
    return 2.0 ** (b + 1.0) / (2.0 * j + b + 1.0)


def jacobi_normalized(j, b, t):
    """Orthonormal Jacobi polynomial for the weight ``(1+t)**b`` on [-1, 1].

    Returns ``(p_j(t), p_j'(t))`` with ``int (1+t)^b p_i p_j dt = delta_ij``.
    The derivative is carried through the same recurrence as the value.
    """
    if j < 0:
        raise ValueError(f"degree must be nonnegative, got {j}")
    if b <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {b}")
    t = np.asarray(t, dtype=float)
    alpha, beta = 0.0, float(b)
    p_prev, p = np.zeros_like(t), np.ones_like(t)
    dp_prev, dp = np.zeros_like(t), np.zeros_like(t)
    if j >= 1:
        # P_1 = (alpha+1) + (alpha+beta+2)(t-1)/2
        c = 0.5 * (alpha + beta + 2.0)
        p_prev, p = p, (alpha + 1.0) + c * (t - 1.0)
        dp_prev, dp = dp, np.full_like(t, c)
    for k in range(2, j + 1):
        s = 2.0 * k + alpha + beta
        a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0)
        a2 = (s - 1.0) * (alpha**2 - beta**2)
        a3 = (s - 1.0) * s * (s - 2.0)
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s
        p_next = ((a2 + a3 * t) * p - a4 * p_prev) / a1
        dp_next = (a3 * p + (a2 + a3 * t) * dp - a4 * dp_prev) / a1
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    scale = 1.0 / np.sqrt(_jacobi_norm_sq(j, beta))
    return (scale * p)[()], (scale * dp)[()]


def assoc_legendre(k, l, t):
    """Associated Legendre function ``(1-t^2)^{l/2} d^l/dt^l P_k(t)``.

    No Condon-Shortley phase. Returns zero when ``l > k``.
    """
    if k < 0 or l < 0:
        raise ValueError(f"degree and order must be nonnegative, got {(k, l)}")
    t = np.asarray(t, dtype=float)
    if l > k:
        return np.zeros_like(t)[()]
    # P_l^l = (2l-1)!! (1-t^2)^{l/2}
    dfact = np.prod(np.arange(1.0, 2.0 * l, 2.0)) if l > 0 else 1.0
    p_prev = np.zeros_like(t)
    p = dfact * np.sqrt(np.clip(1.0 - t * t, 0.0, None)) ** l
    for kk in range(l + 1, k + 1):
        p_next = ((2.0 * kk - 1.0) * t * p - (kk + l - 1.0) * p_prev) / (kk - l)
        p_prev, p = p, p_next
    return p[()]


@dataclass(frozen=True)
class GaussRule1D:
    """A Gauss rule on [-1, 1] for one of the supported weights.

    ``nodes`` are strictly increasing and interior; ``weights`` are positive
    and sum to the integral of the weight function.
    """

    nodes: np.ndarray
    weights: np.ndarray
    weight_kind: str

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def point_count(self) -> int:
        return len(self.nodes)

    def rescaled(self, lo=0.0, hi=1.0):
        """Nodes and weights mapped affinely from [-1, 1] onto [lo, hi].

        Only the interval is changed; the weight function is not
        re-expressed, so this is meaningful for the Legendre rule.
        """
        half = 0.5 * (hi - lo)
        return lo + half * (self.nodes + 1.0), half * self.weights

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def _monic_jacobi_coeffs(q, alpha, beta):
    """Recurrence coefficients (a_n, b_n) of the monic Jacobi polynomials."""
    n = np.arange(q, dtype=float)
    s = 2.0 * n + alpha + beta
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (beta**2 - alpha**2) / (s * (s + 2.0))
    if q > 0 and alpha + beta == 0.0:
        a[0] = (beta - alpha) / (alpha + beta + 2.0)
    n1 = n[1:]
    s1 = s[1:]
    b = 4.0 * n1 * (n1 + alpha) * (n1 + beta) * (n1 + alpha + beta) / (
        s1**2 * (s1 + 1.0) * (s1 - 1.0)
    )
    if len(n1) and alpha + beta == -1.0:
        # n=1 with alpha+beta=-1 is 0/0 in the general formula
        b[0] = 2.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + alpha + beta) ** 2 * (3.0 + alpha + beta))
    return a, b


def _orthonormal_eval(t, q, a, b, mu0):
    """Orthonormal p_0..p_{q-1} at t, plus p_q and p_q' (up to scaling)."""
    sb = np.sqrt(b)
    table = np.empty((q, len(t)))
    p_prev = np.zeros_like(t)
    p = np.full_like(t, 1.0 / np.sqrt(mu0))
    dp_prev = np.zeros_like(t)
    dp = np.zeros_like(t)
    table[0] = p
    for k in range(q):
        # monic-scaled step: p_{k+1} * sqrt(b_{k+1}) = (t - a_k) p_k - sqrt(b_k) p_{k-1}
        sb_k = sb[k - 1] if k >= 1 else 0.0
        num = (t - a[k]) * p - sb_k * p_prev
        dnum = p + (t - a[k]) * dp - sb_k * dp_prev
        if k + 1 < q:
            p_prev, p = p, num / sb[k]
            dp_prev, dp = dp, dnum / sb[k]
            table[k + 1] = p
        else:
            return table, num, dnum
    raise AssertionError("unreachable")


def _gauss_rule(q, alpha, beta, kind):
    if q < 1:
        raise ValueError(f"point count must be positive, got {q}")
    a, b = _monic_jacobi_coeffs(q, alpha, beta)
    mu0 = np.exp((alpha + beta + 1.0) * np.log(2.0) + gammaln(alpha + 1.0)
                 + gammaln(beta + 1.0) - gammaln(alpha + beta + 2.0))
    if q == 1:
        x = np.array([a[0]])
    else:
        x = eigh_tridiagonal(a, np.sqrt(b), eigvals_only=True)
    # Newton polish on the recurrence
    for _ in range(_NEWTON_MAXITER):
        _, pq, dpq = _orthonormal_eval(x, q, a, b, mu0)
        step = pq / dpq
        x = x - step
        if np.max(np.abs(step)) <= _NEWTON_TOL:
            break
    else:
        raise ConvergenceError(f"Gauss nodes did not converge for q={q} ({kind})")
    x = np.sort(x)
    table, _, _ = _orthonormal_eval(x, q, a, b, mu0)
    w = 1.0 / np.sum(table**2, axis=0)
    return GaussRule1D(nodes=x, weights=w, weight_kind=kind)


def gauss_legendre(q):
    """q-point Gauss-Legendre rule on [-1, 1], exact through degree 2q-1."""
    return _gauss_rule(q, 0.0, 0.0, "legendre")


def gauss_jacobi_02(q):
    """q-point Gauss rule for the weight ``(1+t)**2`` on [-1, 1].

    Returns ``(rule, nu)`` where ``nu = rule.weights / 8`` are the weights
    of the radial rule ``int_0^1 r^2 v(r) dr ~ sum nu_k v((zeta_k+1)/2)``.
    """
    rule = _gauss_rule(q, 0.0, 2.0, "jacobi_0_2")
    return rule, rule.weights / 8.0
