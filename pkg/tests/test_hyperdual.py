import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballgalerkin import hyperdual as hd

finite = st.floats(min_value=-2.0, max_value=2.0)


@settings(max_examples=50, deadline=None)
@given(finite, finite)
def test_second_derivatives_exact(s, t):
    f = lambda c: hd.sin(c[0] * c[1]) + hd.exp(c[0] - c[1]) * c[0] ** 3
    lap = hd.laplacian(f, np.array([[s, t]]))[0]
    exact = (-(t * t + s * s) * np.sin(s * t)
             + np.exp(s - t) * (s**3 + 6 * s**2 + 6 * s) + np.exp(s - t) * s**3)
    assert lap == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_sqrt_and_division():
    f = lambda c: hd.sqrt(1.0 + c[0]) / (2.0 + c[0])
    x = np.array([[0.3]])
    h = 1e-4
    g = lambda v: np.sqrt(1 + v) / (2 + v)
    fd2 = (g(0.3 + h) - 2 * g(0.3) + g(0.3 - h)) / h**2
    assert hd.laplacian(f, x)[0] == pytest.approx(fd2, rel=1e-6)
    fd1 = (g(0.3 + 1e-6) - g(0.3 - 1e-6)) / 2e-6
    assert hd.gradient(f, x)[0, 0] == pytest.approx(fd1, rel=1e-8)


def test_plain_arrays_pass_through():
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(hd.cos(x), np.cos(x))
    np.testing.assert_allclose(np.ones(5) - hd.HyperDual(x).a, 1 - x)
    assert isinstance(np.ones(3) + hd.HyperDual(np.zeros(3)), hd.HyperDual)
