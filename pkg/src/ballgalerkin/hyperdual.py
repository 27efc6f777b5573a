"""Hyper-dual numbers for exact second derivatives.

A hyper-dual number ``a + b1 e1 + b2 e2 + b12 e1 e2`` with
``e1**2 = e2**2 = 0`` carries the value, two first-derivative parts and the
mixed second derivative. Seeding a variable with ``b1 = b2 = 1`` gives its
pure second derivative in ``b12`` with no truncation error.

The module-level functions (``sin``, ``cos``, ``exp``, ``sqrt``) dispatch on
type, so the same expression code runs on floats, arrays and hyper-duals.
"""

from __future__ import annotations

import numpy as np

__all__ = ["HyperDual", "sin", "cos", "exp", "sqrt", "laplacian", "gradient"]


class HyperDual:
    __slots__ = ("a", "b1", "b2", "b12")
    __array_ufunc__ = None

    def __init__(self, a, b1=0.0, b2=0.0, b12=0.0):
        self.a = np.asarray(a, dtype=float)
        self.b1 = np.asarray(b1, dtype=float)
        self.b2 = np.asarray(b2, dtype=float)
        self.b12 = np.asarray(b12, dtype=float)

    @staticmethod
    def _lift(other):
        return other if isinstance(other, HyperDual) else HyperDual(other)

    def _chain(self, f0, f1, f2):
        # f(self) given f, f', f'' evaluated at self.a
        return HyperDual(
            f0,
            f1 * self.b1,
            f1 * self.b2,
            f1 * self.b12 + f2 * self.b1 * self.b2,
        )

    def __add__(self, other):
        o = self._lift(other)
        return HyperDual(self.a + o.a, self.b1 + o.b1, self.b2 + o.b2, self.b12 + o.b12)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.a, -self.b1, -self.b2, -self.b12)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return HyperDual(
            self.a * o.a,
            self.a * o.b1 + self.b1 * o.a,
            self.a * o.b2 + self.b2 * o.a,
            self.a * o.b12 + self.b1 * o.b2 + self.b2 * o.b1 + self.b12 * o.a,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        inv = 1.0 / self.a
        return self._chain(inv, -inv * inv, 2.0 * inv**3)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        if n == 0:
            return HyperDual(np.ones_like(self.a))
        a = self.a
        return self._chain(a**n, n * a ** (n - 1), n * (n - 1) * a ** (n - 2) if n > 1 else 0.0)

    def __repr__(self):
        return f"HyperDual({self.a!r}, {self.b1!r}, {self.b2!r}, {self.b12!r})"


def sin(x):
    if isinstance(x, HyperDual):
        s, c = np.sin(x.a), np.cos(x.a)
        return x._chain(s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, HyperDual):
        s, c = np.sin(x.a), np.cos(x.a)
        return x._chain(c, -s, -c)
    return np.cos(x)


def exp(x):
    if isinstance(x, HyperDual):
        e = np.exp(x.a)
        return x._chain(e, e, e)
    return np.exp(x)


def sqrt(x):
    if isinstance(x, HyperDual):
        r = np.sqrt(x.a)
        return x._chain(r, 0.5 / r, -0.25 / (r * x.a))
    return np.sqrt(x)


def laplacian(fn, points):
    """Exact Laplacian of ``fn`` at ``points`` (shape ``(P, d)``).

    ``fn`` receives a list of ``d`` coordinate objects and must be written
    with the operators and functions of this module.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    total = np.zeros(len(pts))
    for i in range(d):
        coords = [
            HyperDual(pts[:, k], 1.0, 1.0, 0.0) if k == i else HyperDual(pts[:, k])
            for k in range(d)
        ]
        total = total + np.broadcast_to(fn(coords).b12, total.shape)
    return total


def gradient(fn, points):
    """Exact gradient of ``fn`` at ``points``, shape ``(P, d)``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    cols = []
    for i in range(d):
        coords = [
            HyperDual(pts[:, k], 1.0, 0.0, 0.0) if k == i else HyperDual(pts[:, k])
            for k in range(d)
        ]
        cols.append(np.broadcast_to(fn(coords).b1, (len(pts),)))
    return np.stack(cols, axis=-1)
