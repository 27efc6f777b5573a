"""Built-in test problems with manufactured right-hand sides.

A problem is described by a built-in map, a ``gamma`` and a true solution
from a small catalog. The right-hand side ``f = -lap u + gamma u`` is
computed exactly with hyper-dual numbers, so no truncation error enters
the load vector.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import hyperdual as hd
from .domainmap import builtin_map, planar_preimage, quadratic_preimage
from .galerkin import EllipticProblem

__all__ = ["builtin_problem", "manufactured_problem", "load_problem", "PROBLEMS", "GAMMAS", "SOLUTIONS"]


def _preimage(map_name, params):
    """Inverse map written on coordinate lists, usable with hyper-duals."""
    if map_name in ("identity2", "identity3"):
        return lambda s: list(s)
    if map_name == "planar_quadratic":
        (a,) = params
        return lambda s: list(planar_preimage(s[0], s[1], a))
    if map_name == "ball_quadratic":
        a, b = params
        return lambda s: [*planar_preimage(s[0], s[1], a), quadratic_preimage(s[2], b)]
    raise ValueError(f"unknown map {map_name!r}")


def _bubble(x):
    out = 1.0
    for c in x:
        out = out - c * c
    return out


GAMMAS = {
    "zero": lambda s: 0.0 * s[0],
    "one": lambda s: 1.0 + 0.0 * s[0],
    "exp_s_minus_t": lambda s: hd.exp(s[0] - s[1]),
}

# true solutions as functions of (physical coords, ball preimage)
SOLUTIONS = {
    "bubble_cos_pi_s": lambda s, x: _bubble(x) * hd.cos(np.pi * s[0]),
    "sin_half_s_minus_t_bubble": lambda s, x: hd.sin(0.5 * (s[0] - s[1])) * _bubble(x),
    "bubble_over_2d": lambda s, x: _bubble(x) / (2.0 * len(x)),
}


def _on_array(expr, d):
    def fn(s):
        s = np.atleast_2d(np.asarray(s, dtype=float))
        if s.shape[1] != d:
            raise ValueError(f"expected points with {d} coordinates, got shape {s.shape}")
        return np.broadcast_to(expr([s[:, i] for i in range(d)]), (len(s),)).astype(float)

    return fn


def _real(v):
    return v.a if isinstance(v, hd.HyperDual) else v


def manufactured_problem(map_name, params=(), gamma="zero", solution="bubble_over_2d", name=None):
    """Problem with ``A = I`` whose right-hand side reproduces a catalog solution."""
    try:
        gamma_expr = GAMMAS[gamma]
    except KeyError:
        raise ValueError(f"unknown gamma {gamma!r}; available: {', '.join(GAMMAS)}") from None
    try:
        sol_expr = SOLUTIONS[solution]
    except KeyError:
        raise ValueError(f"unknown solution {solution!r}; available: {', '.join(SOLUTIONS)}") from None
    dmap = builtin_map(map_name, *params)
    pre = _preimage(map_name, params)
    d = dmap.dim

    def u_expr(s):
        return sol_expr(s, pre(s))

    u = _on_array(lambda s: _real(u_expr(s)), d)
    g = _on_array(lambda s: _real(gamma_expr(s)), d)

    def f(s):
        s = np.atleast_2d(np.asarray(s, dtype=float))
        return -hd.laplacian(u_expr, s) + g(s) * u(s)

    return EllipticProblem(dmap, gamma=g, rhs_f=f, true_solution=u, name=name or solution)


PROBLEMS = {
    "planar_a05": dict(map_name="planar_quadratic", params=(0.5,), gamma="exp_s_minus_t",
                       solution="bubble_cos_pi_s"),
    "ball_a07_b09": dict(map_name="ball_quadratic", params=(0.7, 0.9), gamma="exp_s_minus_t",
                         solution="sin_half_s_minus_t_bubble"),
    "poisson_disk": dict(map_name="identity2", gamma="zero", solution="bubble_over_2d"),
    "poisson_ball": dict(map_name="identity3", gamma="zero", solution="bubble_over_2d"),
}


def builtin_problem(name):
    try:
        spec = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; available: {', '.join(PROBLEMS)}") from None
    return manufactured_problem(name=name, **spec)


def load_problem(path):
    """Read a JSON problem description.

    Keys: ``map`` (built-in map name), ``params`` (list), ``gamma`` and
    ``solution`` (catalog names), optional ``name``.
    """
    cfg = json.loads(Path(path).read_text())
    unknown = set(cfg) - {"map", "params", "gamma", "solution", "name"}
    if unknown:
        raise ValueError(f"unknown keys in {path}: {', '.join(sorted(unknown))}")
    if "map" not in cfg:
        raise ValueError(f"{path}: missing required key 'map'")
    return manufactured_problem(
        cfg["map"],
        tuple(cfg.get("params", ())),
        gamma=cfg.get("gamma", "zero"),
        solution=cfg.get("solution", "bubble_over_2d"),
        name=cfg.get("name", Path(path).stem),
    )
