"""Connectivity decisions and paths for general closed convex bodies.

A body of radius ``r >= 1`` about its m.e.b. center C is handled in stages
``X_0 subset X_1 subset ... subset X_m = X`` with ``X_k = C + (rho_k / r)(X - C)``
and ``rho_k = min(1 + k, r)``. The core ``X_0`` has radius one and is served by a
simplex built from m.e.b. support points (or by a box construction); each later
stage adds one unit step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..bodies import (SUPPORT_EPS, Cone, Hyperrectangle, Placed, Simplex, caratheodory,
                      convex_weights)
from ..geometry import DEFAULT_TOL, Segment, Tolerances, unit_point_on_segment
from .boxes import box_reach, hypercube_path, hyperrectangle_path, rectangle2d_path
from .simplex import CoreReacher, _apex_for, obtuse_triangle_path, simplex_path
from .steppath import PathError, StepPath, join_at_center

__all__ = [
    "REASONS",
    "ConnectivityVerdict",
    "is_connected",
    "scale_lift",
    "ConvexReacher",
    "convex_path",
    "find_path",
]

REASONS = ("radius-zero", "radius-ge-one-affdim-ge-2", "unbounded-ray", "radius-lt-one", "affdim-lt-2")


@dataclass
class ConnectivityVerdict:
    connected: bool
    reason: str
    witness: object = None

    def __post_init__(self):
        if self.reason not in REASONS:
            raise ValueError(f"unknown reason {self.reason!r}")

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, StepPath):
            w = w.to_json()
        elif w is not None:
            w = np.asarray(w, float).tolist()
        return {"connected": self.connected, "reason": self.reason, "witness": w}


def is_connected(body, tol: Tolerances = DEFAULT_TOL) -> ConnectivityVerdict:
    """Connected iff r = 0, or r >= 1 and the affine dimension is at least two."""
    affdim = int(body.affine_dimension())
    if not getattr(body, "bounded", True):
        if affdim >= 2:
            return ConnectivityVerdict(True, "unbounded-ray")
        return ConnectivityVerdict(False, "affdim-lt-2", np.asarray(body.apex, float))
    m = body.meb
    if m.radius <= tol.geom_eps:
        return ConnectivityVerdict(True, "radius-zero")
    if affdim < 2:
        return ConnectivityVerdict(False, "affdim-lt-2", m.center)
    if m.radius < 1.0 - tol.geom_eps:
        return ConnectivityVerdict(False, "radius-lt-one", m.center)
    return ConnectivityVerdict(True, "radius-ge-one-affdim-ge-2")


# --------------------------------------------------------------------------- scaling


def scale_lift(contains_core: Callable, vertices_core, lam: float, x, reach_core: Callable,
               center, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path to x in ``C + lam (X - C)`` from paths in X (given by ``reach_core``).

    With ``P = C + (x - C) / lam`` in X and Q the vertex of X farthest from x, the
    segment PQ (inside X) carries a point R with ``d(R, x) = 1``; the path is
    ``reach_core(R)`` plus one step. Points already in X need no extra step.
    """
    C = np.asarray(center, float)
    x = np.asarray(x, float)
    if contains_core(x, 0.0):
        return reach_core(x)
    P = C + (x - C) / lam
    V = np.asarray(vertices_core, float)
    far = np.linalg.norm(V - x, axis=1)
    Q = V[int(np.argmax(far))]
    if far.max() < 1.0 - tol.geom_eps:
        raise PathError("no point of the core at distance one (core radius below one?)")
    if np.linalg.norm(P - x) > 1.0 + tol.geom_eps:
        raise PathError("scale factor too large for a single lifting step")
    R = unit_point_on_segment(x, Segment(P, Q), tol)
    return reach_core(R).to(x, "scale-lift")


class ConvexReacher:
    """Hub paths from the m.e.b. center C to any point of a bounded body with r >= 1."""

    def __init__(self, body, tol: Tolerances = DEFAULT_TOL):
        verdict = is_connected(body, tol)
        if not verdict.connected:
            raise PathError(f"body is not connected ({verdict.reason})")
        if verdict.reason == "radius-zero":
            raise PathError("single-point body has no nontrivial paths")
        self.body = body
        self.tol = tol
        m = body.meb
        self.C = np.asarray(m.center, float)
        self.r = float(m.radius)
        if self.r <= 1.0 + 1e-12:
            self.r = 1.0
        self.V = np.asarray(body.vertices, float)
        self.rho = [min(1.0 + k, self.r) for k in range(int(math.ceil(self.r - 1.0)) + 1)]
        self._core = self._make_core()

    # X_k membership and vertices
    def _contains(self, k: int, x, eps: float) -> bool:
        s = self.r / self.rho[k]
        return bool(self.body.contains(self.C + s * (np.asarray(x, float) - self.C), eps))

    def _vertices(self, k: int) -> np.ndarray:
        return self.C + (self.rho[k] / self.r) * (self.V - self.C)

    def _make_core(self) -> Callable:
        body, C, r = self.body, self.C, self.r
        if isinstance(body, Hyperrectangle):
            # the core box is l / r, shifted to share the center
            lc = body.l / r
            off = C - lc / 2
            return lambda z: box_reach(lc, np.asarray(z) - off, self.tol).map(lambda q: q + off)
        V1 = self._vertices(0)
        dist = np.linalg.norm(V1 - C, axis=1)
        core = None
        for thr in (1e-12, SUPPORT_EPS):
            S = V1[np.abs(dist - 1.0) <= thr]
            if len(S) < 2:
                continue
            lam, res = convex_weights(S, C)
            if res <= 1e-9:
                idx, _ = caratheodory(S, lam)
                core = S[idx]
                break
        if core is None or len(core) < 2:
            raise PathError("could not extract a support simplex")
        if len(core) == 2:
            apex = _apex_for(V1, core[0], core[1])
            reacher = CoreReacher(core, C, apex=apex, tol=self.tol)
        else:
            reacher = CoreReacher(core, C, region_simplex=Simplex(core), tol=self.tol)
        return reacher.reach

    def reach_stage(self, k: int, x) -> StepPath:
        x = np.asarray(x, float)
        if k == 0:
            return self._core(x)
        lam = self.rho[k] / self.rho[k - 1]
        return scale_lift(lambda z, eps: self._contains(k - 1, z, eps), self._vertices(k - 1), lam, x,
                          lambda z: self.reach_stage(k - 1, z), self.C, self.tol)

    def reach(self, x) -> StepPath:
        return self.reach_stage(len(self.rho) - 1, x)

    def path(self, u, v) -> StepPath:
        return join_at_center(self.reach(u), self.reach(v))


def _prepare(body, u, v, tol):
    u, v = np.asarray(u, float), np.asarray(v, float)
    if u.shape != (body.dim,) or v.shape != (body.dim,):
        raise ValueError("endpoint dimension does not match the body")
    for w in (u, v):
        if not body.contains(w, tol.geom_eps):
            raise ValueError("endpoint outside the body")
    if isinstance(body, Cone) and not body.bounded:
        body = body.truncation(u, v, min_radius=1.0)
    return body, u, v


def convex_path(body, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Unit-step path between two points of a closed convex body of radius >= 1."""
    body, u, v = _prepare(body, u, v, tol)
    if np.array_equal(u, v):
        return StepPath.at(u)
    if body.affine_dimension() < 2:
        raise PathError("affine dimension below two")
    if body.radius < 1.0 - tol.geom_eps:
        raise PathError("radius below one")
    return ConvexReacher(body, tol).path(u, v)


def find_path(body, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Dispatch to the most specific construction for the body class."""
    body, u, v = _prepare(body, u, v, tol)
    if np.array_equal(u, v):
        return StepPath.at(u)
    verdict = is_connected(body, tol)
    if not verdict.connected:
        raise PathError(f"body is not connected ({verdict.reason})")
    if isinstance(body, Placed):
        inner = find_path(body.body, body.to_local(u), body.to_local(v), tol)
        path = inner.map(body.to_world)
        path.points[0], path.points[-1] = u, v
        return path
    r = body.radius
    if isinstance(body, Hyperrectangle) and abs(r - 1.0) <= 1e-7:
        l = body.l
        pos = np.flatnonzero(l > 0)
        if len(pos) == 2 and len(l) == 2:
            if l[0] >= l[1]:
                return rectangle2d_path(l[0], l[1], u, v, tol)
            swap = rectangle2d_path(l[1], l[0], u[::-1], v[::-1], tol)
            return swap.map(lambda p: p[::-1])
        if np.allclose(l, l[0]):
            return hypercube_path(len(l), u, v, tol)
        return hyperrectangle_path(l, u, v, tol=tol)
    if isinstance(body, Simplex) and abs(r - 1.0) <= 1e-7:
        if len(body.points) == 3 and np.sum(body.barycentric(body.meb.center) > 1e-9) == 2:
            return obtuse_triangle_path(body, u, v, tol)
        return simplex_path(body, u, v, tol)
    return convex_path(body, u, v, tol)
