import numpy as np
import pytest

from unitdist import Simplex, is_well_centered


def random_unit_sphere(rng, n, d):
    X = rng.normal(size=(n, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def random_well_centered_simplex(rng, d):
    """Simplex with d+1 vertices on the unit sphere whose center is interior."""
    while True:
        S = Simplex(random_unit_sphere(rng, d + 1, d))
        if is_well_centered(S, 1e-3) and abs(S.radius - 1) < 1e-9:
            return S


def random_obtuse_triangle(rng, min_height=0.4):
    """Radius-one triangle with base (-1,0)-(1,0) and apex strictly inside the unit disk."""
    while True:
        a, b = rng.uniform(-0.9, 0.9), rng.uniform(min_height, 0.95)
        if a * a + b * b < 0.97:
            return Simplex([[-1.0, 0.0], [1.0, 0.0], [a, b]])


def random_point_in(rng, body):
    lo, hi = body.bounding_box()
    for _ in range(100000):
        p = rng.uniform(lo, hi)
        if body.contains(p):
            return p
    raise RuntimeError("rejection sampling failed")


def random_point_in_simplex(rng, S):
    w = rng.dirichlet(np.ones(len(S.points)))
    return w @ S.points


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
