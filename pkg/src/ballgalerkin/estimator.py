"""Estimator-style front end for the Galerkin solver."""

from __future__ import annotations

import numbers
import time

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .galerkin import EllipticProblem, assemble, condition_number, evaluate_solution, solve

__all__ = ["SpectralGalerkinSolver"]


class SpectralGalerkinSolver(BaseEstimator):
    """Spectral Galerkin solver for Dirichlet problems on images of the unit ball.

    Parameters
    ----------
    degree : int, default=10
        Total polynomial degree of the trial space.
    quad : "auto" or int, default="auto"
        Quadrature order. ``"auto"`` uses ``max(n+2, 10)`` on the disk and
        ``n+2`` on the ball.

    Attributes
    ----------
    system_ : GalerkinSystem
        Assembled and solved linear system.
    coef_ : ndarray of shape (N,)
        Coefficients of the trial functions.
    n_features_in_ : int
        Spatial dimension of the problem.
    assemble_seconds_, solve_seconds_ : float
        Wall-clock timings of the last fit.

    Examples
    --------
    >>> from ballgalerkin.problems import builtin_problem
    >>> est = SpectralGalerkinSolver(degree=4).fit(builtin_problem("poisson_disk"))
    >>> float(est.predict([[0.0, 0.0]], frame="ball")[0])  # doctest: +ELLIPSIS
    0.25...
    """

    def __init__(self, degree=10, quad="auto"):
        self.degree = degree
        self.quad = quad

    def _validate_params(self):
        if not isinstance(self.degree, numbers.Integral) or self.degree < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.degree!r}")
        if self.quad != "auto" and (not isinstance(self.quad, numbers.Integral) or self.quad < 1):
            raise ValueError(f"quad must be 'auto' or a positive integer, got {self.quad!r}")

    def fit(self, problem, y=None):
        if not isinstance(problem, EllipticProblem):
            raise TypeError(f"fit expects an EllipticProblem, got {type(problem).__name__}")
        self._validate_params()
        t0 = time.perf_counter()
        system = assemble(problem, int(self.degree), self.quad)
        t1 = time.perf_counter()
        solve(system)
        t2 = time.perf_counter()
        self.problem_ = problem
        self.system_ = system
        self.coef_ = system.coeffs
        self.n_features_in_ = problem.dim
        self.assemble_seconds_ = t1 - t0
        self.solve_seconds_ = t2 - t1
        return self

    def predict(self, X, frame="omega"):
        """Evaluate the Galerkin solution at physical points, or ball points with ``frame='ball'``."""
        check_is_fitted(self, "system_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return evaluate_solution(self.system_, X, frame=frame)

    def score(self, X, y, frame="omega"):
        """Negative maximum absolute error, so that larger is better."""
        y = np.asarray(y, dtype=float)
        return -float(np.max(np.abs(self.predict(X, frame=frame) - y)))

    def condition_number(self):
        check_is_fitted(self, "system_")
        return condition_number(self.system_)
