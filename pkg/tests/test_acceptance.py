"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""

import functools
import math
import time

import numpy as np
import pytest
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull

import conftest
from conftest import (random_obtuse_triangle, random_point_in, random_point_in_simplex,
                      random_well_centered_simplex)
from unitdist import (Hyperrectangle, Simplex, VPolytope, find_path, hypercube_path, hyperrectangle_bound,
                      hyperrectangle_path, is_connected, is_meb_by_seidel, meb, obtuse_triangle_path,
                      radius_graph, rectangle2d_path, rectangle_bound, simplex_path)
from unitdist.oracle import build_grid_graph, grid_components, validate_path
from unitdist.squares import classify_points, corners
from unitdist.walker import WalkConfig, feasible_directions, radial_ks, run_ensemble

GEOM_EPS = 1e-9


def criterion(n, title):
    def deco(f):
        @functools.wraps(f)
        def wrapper(*a, **k):
            t0 = time.perf_counter()
            try:
                detail = f(*a, **k)
            except BaseException as exc:
                line = f"criterion {n}: FAIL {title} ({type(exc).__name__}: {str(exc)[:120]})"
                conftest.ACCEPTANCE_LINES.append(line)
                print(line)
                raise
            line = f"criterion {n}: PASS {title} [{time.perf_counter() - t0:.1f}s] {detail or ''}".rstrip()
            conftest.ACCEPTANCE_LINES.append(line)
            print(line)
        return wrapper
    return deco


def check(body, path, u, v):
    ok, bad = validate_path(body, path, GEOM_EPS)
    assert ok, f"invalid path: {bad[:3]}"
    assert np.allclose(path.start, u, atol=1e-12) and np.allclose(path.end, v, atol=1e-12)
    return path.steps


def rect_formula(l1, l2):
    if l2 >= 1:
        return 8
    return 4 + 8 * math.ceil((l1 - 1) / (2 * (1 - math.sqrt(1 - l2 * l2))))


# --------------------------------------------------------------------------- 1


@criterion(1, "path validity over 1000 randomized instances")
def test_criterion_1_path_validity():
    rng = np.random.default_rng(1001)
    t0 = time.perf_counter()
    counts = {}

    def run(kind, body, path_fn, u, v):
        check(body, path_fn(u, v), u, v)
        counts[kind] = counts.get(kind, 0) + 1

    for _ in range(150):  # rectangles of radius exactly one
        l2 = rng.uniform(0.2, math.sqrt(2))
        l1 = math.sqrt(4 - l2 * l2)
        R = Hyperrectangle(rng.permutation([l1, l2]))
        u, v = rng.uniform(0, 1, 2) * R.l, rng.uniform(0, 1, 2) * R.l
        run("rect-r1", R, lambda a, b: find_path(R, a, b), u, v)
    for _ in range(150):  # rectangles of radius above one
        l = rng.uniform(0.1, 1, 2)
        R = Hyperrectangle(l / np.linalg.norm(l) * rng.uniform(2.0, 6.0))
        u, v = rng.uniform(0, 1, 2) * R.l, rng.uniform(0, 1, 2) * R.l
        run("rect-r>1", R, lambda a, b: find_path(R, a, b), u, v)
    for _ in range(200):  # obtuse triangles of radius one
        T = random_obtuse_triangle(rng)
        u, v = random_point_in_simplex(rng, T), random_point_in_simplex(rng, T)
        run("obtuse", T, lambda a, b: obtuse_triangle_path(T, a, b), u, v)
    for d in range(2, 6):  # well-centered simplices
        for _ in range(75):
            S = random_well_centered_simplex(rng, d)
            u, v = random_point_in_simplex(rng, S), random_point_in_simplex(rng, S)
            run(f"simplex-d{d}", S, lambda a, b: simplex_path(S, a, b), u, v)
    for i in range(200):  # hypercubes C^d(2/sqrt d)
        d = 2 + i % 7
        C = Hyperrectangle(np.full(d, 2 / math.sqrt(d)))
        u, v = rng.uniform(0, 1, d) * C.l, rng.uniform(0, 1, d) * C.l
        run(f"cube-d{d}", C, lambda a, b: hypercube_path(d, a, b), u, v)
    total = sum(counts.values())
    elapsed = time.perf_counter() - t0
    assert total == 1000
    assert elapsed < 120, f"took {elapsed:.1f}s"
    return f"{total} paths in {elapsed:.1f}s"


# --------------------------------------------------------------------------- 2


@criterion(2, "hypercube paths within 8 steps, d = 2..8")
def test_criterion_2_hypercube_bound():
    rng = np.random.default_rng(2002)
    worst = 0
    for d in range(2, 9):
        C = Hyperrectangle(np.full(d, 2 / math.sqrt(d)))
        for _ in range(100):
            u, v = rng.uniform(0, 1, d) * C.l, rng.uniform(0, 1, d) * C.l
            steps = check(C, hypercube_path(d, u, v), u, v)
            assert steps <= 8
            worst = max(worst, steps)
    return f"max steps {worst}"


# --------------------------------------------------------------------------- 3


@criterion(3, "rectangle bound")
def test_criterion_3_rectangle_bound():
    rng = np.random.default_rng(3003)
    assert rectangle_bound(math.sqrt(4 - 0.36), 0.6).bound == 28
    assert rect_formula(math.sqrt(4 - 0.36), 0.6) == 28
    worst = {}
    for l2 in [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, math.sqrt(2)]:
        l1 = math.sqrt(4 - l2 * l2)
        bound = rect_formula(l1, l2)
        assert rectangle_bound(l1, l2).bound == bound
        R = Hyperrectangle([l1, l2])
        for _ in range(50):
            u, v = rng.uniform(0, 1, 2) * R.l, rng.uniform(0, 1, 2) * R.l
            steps = check(R, rectangle2d_path(l1, l2, u, v), u, v)
            assert steps <= bound, (l2, steps, bound)
            worst[round(l2, 3)] = max(worst.get(round(l2, 3), 0), steps)
    return "worst " + ", ".join(f"{k}:{v}" for k, v in worst.items())


# --------------------------------------------------------------------------- 4


@criterion(4, "hyperrectangle composition, l = (1,1,1,1) within 10 steps")
def test_criterion_4_hyperrectangle():
    rng = np.random.default_rng(4004)
    l = np.ones(4)
    R = Hyperrectangle(l)
    assert hyperrectangle_bound(l, [0, 1]).bound == 10
    pts = [rng.uniform(0, 1, 4) for _ in range(200)] + [rng.integers(0, 2, 4).astype(float) for _ in range(100)]
    worst = 0
    for i in range(0, len(pts) - 1, 2):
        u, v = pts[i], pts[i + 1]
        steps = check(R, hyperrectangle_path(l, u, v, [0, 1]), u, v)
        assert steps <= 10
        worst = max(worst, steps)
    return f"max steps {worst}"


# --------------------------------------------------------------------------- 5


def _true_radius(P):
    """Minimax center by SLSQP, independent of the Welzl solver."""
    c0 = P.mean(axis=0)
    t0 = float(np.max(np.sum((P - c0) ** 2, axis=1)))
    x0 = np.append(c0, t0)
    cons = {"type": "ineq", "fun": lambda x: x[-1] - np.sum((P - x[:-1]) ** 2, axis=1),
            "jac": lambda x: np.column_stack([2 * (P - x[:-1]), np.ones(len(P))])}
    res = minimize(lambda x: x[-1], x0, jac=lambda x: np.eye(len(x))[-1], constraints=[cons],
                   method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
    return math.sqrt(max(res.x[-1], 0.0))


def _inradius_2d(P):
    E = ConvexHull(P).equations
    A, b = E[:, :-1], -E[:, -1]
    res = linprog([0, 0, -1], A_ub=np.c_[A, np.linalg.norm(A, axis=1)], b_ub=b,
                  bounds=[(None, None), (None, None), (0, None)])
    return float(res.x[-1])


# the h = 0.02 grid only resolves bodies at least 2 delta thick (four node rows)
GRID_MIN_INRADIUS = 0.08


def _random_body(rng):
    k = int(rng.integers(0, 5))
    d = max(k, 2) + int(rng.integers(0, 2))
    if k == 0:
        return VPolytope(np.repeat(rng.normal(size=(1, d)), int(rng.integers(1, 3)), axis=0)), 0, 0.0
    basis = np.linalg.qr(rng.normal(size=(d, k)))[0]
    coeff = rng.normal(size=(k + 1 + int(rng.integers(0, 4)), k))
    P = coeff @ basis.T
    r0 = meb(P).radius
    target = rng.uniform(0.2, 3.0)
    P = P * (target / r0) + rng.normal(size=d)
    return VPolytope(P), k, target


@criterion(5, "connectivity decision on 1000 random bodies")
def test_criterion_5_connectivity():
    rng = np.random.default_rng(5005)
    mismatches, checked_pairs, grid_bodies, slivers = 0, 0, 0, 0
    for _ in range(1000):
        body, k, target = _random_body(rng)
        r = 0.0 if k == 0 else _true_radius(body.points)
        assert abs(r - target) < 1e-6
        assert body.affine_dimension() == k
        expected = r == 0 or (r >= 1 and k >= 2)
        verdict = is_connected(body)
        mismatches += verdict.connected != expected
        if verdict.connected and body.dim == 2 and k == 2:
            if _inradius_2d(body.points) < GRID_MIN_INRADIUS:
                slivers += 1
                continue
            grid_bodies += 1
            g = build_grid_graph(body, 0.02, 0.04)
            _, labels = grid_components(g)
            for _ in range(20):
                u, v = random_point_in(rng, body), random_point_in(rng, body)
                a, b = labels[g.snap(u)], labels[g.snap(v)]
                assert a == b, "grid oracle disagrees on a connected pair"
                checked_pairs += 1
    assert mismatches == 0
    return (f"0 mismatches; {grid_bodies} planar bodies, {checked_pairs} grid-connected pairs, "
            f"{slivers} slivers below the grid resolution skipped")


# --------------------------------------------------------------------------- 6


@criterion(6, "disconnection witness for C^2(1.2)")
def test_criterion_6_witness():
    body = Hyperrectangle([1.2, 1.2])
    verdict = is_connected(body)
    assert not verdict.connected and verdict.reason == "radius-lt-one"
    assert np.allclose(verdict.witness, (0.6, 0.6))
    assert feasible_directions(body, (0.6, 0.6)).kind == "empty"
    # delta = 0.05 needs h <= 0.05 / sqrt 2 for representable edges; check both
    for h, coarse in ((0.05, True), (0.025, False)):
        g = build_grid_graph(body, h, 0.05, allow_coarse=coarse)
        assert len(g.neighbors(g.snap((0.6, 0.6)))) == 0
    return "center isolated analytically and on the grid"


# --------------------------------------------------------------------------- 7


@criterion(7, "radius graphs of 1000 unit simplices")
def test_criterion_7_radius_graph():
    rng = np.random.default_rng(7007)
    for _ in range(1000):
        d = int(rng.integers(2, 6))
        n = int(rng.integers(2, d + 2))
        while True:
            try:
                S = Simplex(rng.normal(size=(n, d)))
                break
            except ValueError:
                continue
        m = S.meb
        S = Simplex((S.points - m.center) / m.radius)
        g = radius_graph(S)
        # edges re-derived from inner products
        N = g.nodes - g.center
        G = N @ N.T
        ref = sorted((i, j) for i in range(len(N)) for j in range(i + 1, len(N)) if G[i, j] <= GEOM_EPS)
        assert sorted(g.edges) == ref
        assert g.is_connected()
        assert max(g.eccentricity(s) for s in range(len(N))) <= len(N) - 1
    return "0 counterexamples"


# --------------------------------------------------------------------------- 8


def _arc_points(rng, l, k, n):
    v = corners(l)[k]
    out = []
    while len(out) < n:
        t = rng.uniform(0, 2 * math.pi)
        p = v + [math.cos(t), math.sin(t)]
        if np.all(p >= 0) and np.all(p <= l):
            out.append(p)
    return np.array(out)


@criterion(8, "square components consistent with the grid oracle")
def test_criterion_8_square_components():
    rng = np.random.default_rng(8008)
    pairs_checked, isolated_checked = 0, 0
    for l in (0.75, 2 / math.sqrt(5), 1.0):
        body = Hyperrectangle([l, l])
        g = build_grid_graph(body, 0.01, 0.02)
        _, labels = grid_components(g)
        P = rng.uniform(0, l, (20000, 2))
        arcs = [_arc_points(rng, l, k, 100) for k in range(4)]
        P = np.vstack([P, corners(l), *arcs])
        ids = np.array([lab.component_id for lab in classify_points(l, P)])
        groups = {c: np.flatnonzero(ids == c) for c in set(ids) if c != "isolated"}
        per = math.ceil(1000 / len(groups))
        for c, idx in groups.items():
            for _ in range(per):
                i, j = rng.choice(idx, 2)
                assert labels[g.snap(P[i])] == labels[g.snap(P[j])], (l, c)
                pairs_checked += 1
        iso = np.flatnonzero(ids == "isolated")
        for i in rng.choice(iso, 1000, replace=len(iso) < 1000):
            assert feasible_directions(body, P[i]).kind == "empty"
            isolated_checked += 1
    return f"{pairs_checked} same-label pairs, {isolated_checked} isolated points"


# --------------------------------------------------------------------------- 9


@criterion(9, "random walk, l = 2, s = 25, two seeds")
def test_criterion_9_walk():
    t0 = time.perf_counter()
    body = Hyperrectangle([2, 2])
    ens = [run_ensemble(WalkConfig(body, (0.1, 0.1), 25, 20000, seed=s, keep_trajectories=True)) for s in (1, 2)]
    for e in ens:
        assert np.all(e.status == "ok")
        T = e.trajectories
        assert np.all(body.contains(T.reshape(-1, 2), GEOM_EPS))
        assert np.all(np.abs(np.linalg.norm(np.diff(T, axis=1), axis=2) - 1) <= GEOM_EPS)
    ks = radial_ks(*ens)
    elapsed = time.perf_counter() - t0
    assert ks < 0.02
    assert elapsed < 60
    return f"KS sup-difference {ks:.4f} in {elapsed:.1f}s"


# --------------------------------------------------------------------------- 10


@criterion(10, "m.e.b. support and local minimality on 1000 point sets")
def test_criterion_10_meb():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 6))
        P = rng.normal(size=(int(rng.integers(1, 40)), d)) * rng.uniform(0.1, 10)
        m = meb(P)
        assert np.all(np.linalg.norm(P - m.center, axis=1) <= m.radius + GEOM_EPS)
        if m.radius > 0:
            assert is_meb_by_seidel(m.support, m.ball)
        U = rng.normal(size=(32, d))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        for c in m.center + 1e-4 * U:
            need = np.max(np.linalg.norm(P - c, axis=1))
            worst = max(worst, m.radius - need)
            assert need >= m.radius - GEOM_EPS
    return f"largest radius decrease {worst:.2e}"
