import dataclasses
import math

import numpy as np
import pytest

from ballgalerkin import galerkin
from ballgalerkin.ballbasis import dim_pi, psi_table
from ballgalerkin.domainmap import builtin_map
from ballgalerkin.galerkin import (
    EllipticProblem,
    GalerkinSystem,
    assemble,
    condition_number,
    error_grid,
    evaluate_solution,
    max_grid_error,
    solve,
)
from ballgalerkin.problems import builtin_problem

from conftest import random_ball_points


def _const(c):
    return lambda s: np.full(len(s), float(c))


def _poisson(d, f=1.0):
    return EllipticProblem(builtin_map(f"identity{d}"), gamma=_const(0.0), rhs_f=_const(f))


def test_degree_zero_disk_matrix():
    sys_ = assemble(_poisson(2, 4 / math.sqrt(math.pi)), 0, 4)
    assert sys_.matrix.shape == (1, 1)
    assert sys_.matrix[0, 0] == pytest.approx(2.0, rel=1e-14)
    assert sys_.load[0] == pytest.approx(2.0, rel=1e-14)
    assert solve(sys_)[0] == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("name,n", [("planar_a05", 6), ("ball_a07_b09", 4)])
def test_system_symmetric_positive_definite(name, n):
    s = assemble(builtin_problem(name), n)
    assert s.symmetry_defect <= 1e-12
    np.testing.assert_array_equal(s.matrix, s.matrix.T)
    assert np.linalg.eigvalsh(s.matrix)[0] > 0
    solve(s)
    assert s.positive_definite
    assert np.max(np.abs(s.matrix @ s.coeffs - s.load)) <= 1e-10 * np.max(np.abs(s.load))


def test_solve_identity():
    b = np.array([1.0, -2.0, 3.0])
    s = GalerkinSystem(0, 2, np.eye(3), b, 1, builtin_map("identity2"))
    np.testing.assert_allclose(solve(s), b)


def test_solve_indefinite_fallback():
    M = np.array([[1.0, 2.0], [2.0, 1.0]])
    s = GalerkinSystem(0, 2, M, np.array([3.0, 3.0]), 1, builtin_map("identity2"))
    np.testing.assert_allclose(solve(s), [1.0, 1.0])
    assert s.positive_definite is False


def test_evaluate_unit_coefficients(rng):
    s = GalerkinSystem(3, 2, np.eye(10), np.zeros(10), 5, builtin_map("identity2"))
    x = random_ball_points(rng, 15, 2)
    V, _ = psi_table(3, 2, x)
    for j in range(10):
        s.coeffs = np.eye(10)[j]
        np.testing.assert_allclose(evaluate_solution(s, x), V[:, j])


@pytest.mark.parametrize("d", [2, 3])
def test_evaluate_zero_on_boundary(d):
    p = builtin_problem("planar_a05" if d == 2 else "ball_a07_b09")
    s = assemble(p, 4)
    solve(s)
    axes = np.vstack([np.eye(d), -np.eye(d)])
    assert np.all(evaluate_solution(s, axes) == 0.0)


def test_evaluate_omega_frame_and_rejection():
    p = builtin_problem("planar_a05")
    s = assemble(p, 8)
    solve(s)
    x = np.array([[0.2, 0.3], [-0.5, 0.1]])
    np.testing.assert_allclose(evaluate_solution(s, p.map.phi(x), frame="omega"), evaluate_solution(s, x), atol=1e-13)
    with pytest.raises(ValueError, match="outside"):
        evaluate_solution(s, [[0.9, 0.9]])
    with pytest.raises(ValueError):
        evaluate_solution(s, x, frame="sphere")


def test_unsolved_system_rejected():
    s = assemble(_poisson(2), 2)
    with pytest.raises(ValueError, match="not been solved"):
        evaluate_solution(s, [[0.0, 0.0]])


def test_error_grids():
    g2 = error_grid(2)
    assert len(g2) == 201
    assert len(np.unique(np.round(g2, 14), axis=0)) == 201
    # i=10, j=5 follows the centre and the first 9 rings of 20
    np.testing.assert_allclose(g2[1 + 9 * 20 + 4], [0.0, 1.0], atol=1e-15)
    g3 = error_grid(3)
    assert g3.shape == (16000, 3)
    assert np.max(np.linalg.norm(g3, axis=1)) < 1


def test_condition_number_examples():
    assert condition_number(np.eye(4)) == pytest.approx(1.0)
    assert condition_number(np.diag([1.0, 10.0])) == pytest.approx(10.0)


@pytest.mark.parametrize("d,exact", [(2, 4.0), (3, 6.0)])
def test_galerkin_exact_in_trial_space(d, exact):
    x = error_grid(d)
    u = (1 - np.sum(x * x, axis=1)) / exact
    for n in range(0, 7):
        s = assemble(_poisson(d), n)
        solve(s)
        assert np.max(np.abs(evaluate_solution(s, x) - u)) <= 1e-12, n


def test_planar_convergence_monotone():
    p = builtin_problem("planar_a05")
    errs = {}
    for n in range(2, 26):
        s = assemble(p, n)
        solve(s)
        errs[n] = max_grid_error(s, p)
    for n in range(2, 24):
        assert errs[n + 2] <= max(errs[n], 1e-12), n


@pytest.mark.parametrize("name", [
    "planar_a05",
    pytest.param("ball_a07_b09", marks=pytest.mark.xfail(
        strict=True,
        reason="at n=10 the ball error (~7e-9) is still quadrature-limited at q=20 "
               "(1/(1+0.9z) has a pole near the ball), so q=20 and q=30 differ by ~90%")),
])
def test_quadrature_order_stability(name):
    p = builtin_problem(name)
    errs = []
    for q in (20, 30):
        s = assemble(p, 10, q)
        solve(s)
        errs.append(max_grid_error(s, p))
    assert abs(errs[0] - errs[1]) < 0.05 * errs[1]


def test_assembly_insensitive_to_node_order(monkeypatch, rng):
    p = builtin_problem("planar_a05")
    ref = assemble(p, 8, 12)
    rule = galerkin.quad_rule(2, 12)
    perm = rng.permutation(len(rule))
    shuffled = dataclasses.replace(rule, nodes=rule.nodes[perm].copy(), weights=rule.weights[perm].copy(),
                                   spherical=rule.spherical[perm].copy())
    monkeypatch.setattr(galerkin, "quad_rule", lambda d, q: shuffled)
    other = assemble(p, 8, 12)
    assert np.max(np.abs(other.matrix - ref.matrix)) <= 1e-12 * np.max(np.abs(ref.matrix))
    np.testing.assert_allclose(other.load, ref.load, atol=1e-12)


def test_assembly_deterministic():
    p = builtin_problem("ball_a07_b09")
    a, b = assemble(p, 5), assemble(p, 5)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    np.testing.assert_array_equal(a.load, b.load)


def test_default_quadrature():
    assert galerkin.default_quad(3, 2) == 10
    assert galerkin.default_quad(20, 2) == 22
    assert galerkin.default_quad(8, 3) == 10
    assert assemble(_poisson(3), 2).quad_q == 4


def test_assembly_reports_bad_node():
    bad = EllipticProblem(builtin_map("identity2"), gamma=lambda s: np.where(s[:, 1] > 0.5, np.nan, 0.0), rhs_f=_const(1.0))
    with pytest.raises(galerkin.AssemblyError, match="quadrature node"):
        assemble(bad, 2)


def test_system_size_matches_dimension():
    for d in (2, 3):
        s = assemble(_poisson(d), 4)
        assert s.size == dim_pi(4, d)
