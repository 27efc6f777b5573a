import math

import numpy as np
import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(label, passed, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def ball_moment(alpha):
    """Exact integral of prod x_k^alpha_k over the unit ball in len(alpha) dimensions."""
    if any(a % 2 for a in alpha):
        return 0.0
    d = len(alpha)
    betas = [(a + 1) / 2 for a in alpha]
    log_sphere = math.log(2.0) + sum(math.lgamma(b) for b in betas) - math.lgamma(sum(betas))
    return math.exp(log_sphere) / (sum(alpha) + d)


def random_ball_points(rng, n, d, rmin=0.0, rmax=1.0):
    v = rng.normal(size=(n, d))
    v /= np.linalg.norm(v, axis=1)[:, None]
    r = rng.uniform(rmin, rmax, size=n)
    return v * r[:, None]
