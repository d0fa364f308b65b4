"""Paths through simplices whose minimum enclosing ball has radius one.

Everything is organised around the ball center C. A :class:`CoreReacher` produces a
path from C to any point of the ball that lies in the body: the point is first tied
to a radius segment ``C V`` by one unit step (some vertex V always has the point in
its half-space ``H(C, V)``), and points of ``C V`` are reached through a planar
triangle containing C.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..bodies import SUPPORT_EPS, Simplex, affine_rank
from ..geometry import DEFAULT_TOL, Segment, Tolerances, unit_point_on_curve, unit_point_on_segment
from .planar import BaseReach, Frame2D, Region2D
from .steppath import PathError, StepPath, join_at_center

__all__ = [
    "CoreReacher",
    "RadiusGraph",
    "radius_graph",
    "obtuse_triangle_path",
    "simplex_path",
    "simplex_reacher",
]


def _on_segment(z, a, b, eps=1e-12) -> float | None:
    """Parameter of z on segment ab, or None when z is off it."""
    ab = b - a
    t = float(np.dot(z - a, ab) / np.dot(ab, ab))
    if -eps <= t <= 1 + eps and np.linalg.norm(a + t * ab - z) <= eps:
        return min(max(t, 0.0), 1.0)
    return None


class CoreReacher:
    """Reach any point of the unit ball about ``center`` (inside the body) from the center.

    ``core`` holds affinely independent points on the unit sphere about ``center``
    whose convex hull contains the center in its relative interior. With two core
    points (a diameter) ``apex`` supplies the third corner of the non-acute triangle
    used for the base construction; ``region_simplex`` optionally replaces that
    triangle by a larger simplex whose planar slices bound the constructions.
    """

    def __init__(self, core, center, apex=None, region_simplex: Simplex | None = None,
                 tol: Tolerances = DEFAULT_TOL):
        self.core = np.atleast_2d(np.asarray(core, float))
        self.C = np.asarray(center, float)
        self.tol = tol
        k = len(self.core)
        if k < 2:
            raise PathError("core needs at least two points")
        d = np.linalg.norm(self.core - self.C, axis=1)
        if np.any(np.abs(d - 1.0) > SUPPORT_EPS):
            raise PathError("core points must lie on the unit sphere about the center")
        self._bases: dict[int, tuple] = {}
        if k == 2:
            if apex is None:
                raise PathError("a diameter core needs an apex")
            F0, F1 = self.core
            tri = Simplex([F0, F1, apex])
            region_s = region_simplex if region_simplex is not None else tri
            frame = Frame2D.from_base(F0, F1, apex)
            self._diameter = BaseReach(frame, float(np.linalg.norm(F1 - F0)),
                                       Region2D.slice_of(region_s, frame), tol)
        else:
            self._diameter = None
            self._region_simplex = region_simplex if region_simplex is not None else Simplex(self.core)

    # -- radius segments ----------------------------------------------------------

    def _base_for(self, i: int):
        if i in self._bases:
            return self._bases[i]
        P = self.core[i]
        dots = (self.core - self.C) @ (P - self.C)
        dots[i] = np.inf
        candidates = np.flatnonzero(dots <= 1e-12)
        if len(candidates) == 0:
            raise PathError("no vertex in the half-space of a core vertex")
        # the least obtuse partner gives the roomiest triangle
        j = int(candidates[np.argmax(dots[candidates])])
        Q = self.core[j]
        frame = Frame2D.from_base(Q, P, self.C)
        region = Region2D.slice_of(self._region_simplex, frame)
        base = BaseReach(frame, float(np.linalg.norm(P - Q)), region, self.tol)
        self._bases[i] = (base, frame)
        return self._bases[i]

    def reach_radius(self, i: int, y) -> StepPath:
        """Path from the center to a point ``y`` on the radius segment to ``core[i]``."""
        y = np.asarray(y, float)
        if np.linalg.norm(y - self.C) <= 1e-13:
            return StepPath.at(self.C)
        if self._diameter is not None:
            return self._diameter.reach(self._diameter.base_param(y))
        base, frame = self._base_for(i)
        P = self.core[i]
        x, L = base.x, base.L
        phi_c = base.phi1

        # the curve runs along the base from Q to X = (x, 0), then on the unit circle about P to C
        def curve(s):
            if s <= 1.0:
                return frame.world(s * x, 0.0)
            t = np.pi + (s - 1.0) * (phi_c - np.pi)
            return frame.world(L + np.cos(t), np.sin(t))

        s, w = unit_point_on_curve(y, curve, 0.0, 2.0, self.tol)
        if s <= 1.0:
            path = base.reach(s * x)
        else:
            path = StepPath([self.C, P, w], ["corner", "arc-hop"])
        if np.linalg.norm(path.end - y) <= 1e-13:
            return path
        return path.to(y, "radius-segment")

    # -- arbitrary points -----------------------------------------------------------

    def reach(self, z) -> StepPath:
        z = np.asarray(z, float)
        if np.linalg.norm(z - self.C) <= 1e-13:
            return StepPath.at(self.C)
        for i, P in enumerate(self.core):
            if _on_segment(z, self.C, P) is not None:
                return self.reach_radius(i, z)
        if np.linalg.norm(z - self.C) > 1.0 + self.tol.geom_eps:
            raise PathError("point lies outside the unit ball about the center")
        i = int(np.argmin((self.core - self.C) @ (z - self.C)))
        y = unit_point_on_segment(z, Segment(self.C, self.core[i]), self.tol)
        return self.reach_radius(i, y).to(z, "half-space")

    def path(self, u, v) -> StepPath:
        return join_at_center(self.reach(u), self.reach(v))


# --------------------------------------------------------------------------- radius graph


@dataclass
class RadiusGraph:
    nodes: np.ndarray
    edges: list
    center: np.ndarray

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(len(self.nodes))]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def bfs(self, source: int = 0) -> list:
        adj = self.adjacency()
        dist = [None] * len(self.nodes)
        dist[source] = 0
        q = deque([source])
        while q:
            i = q.popleft()
            for j in adj[i]:
                if dist[j] is None:
                    dist[j] = dist[i] + 1
                    q.append(j)
        return dist

    def is_connected(self) -> bool:
        return all(x is not None for x in self.bfs(0))

    def eccentricity(self, source: int = 0) -> float:
        dist = self.bfs(source)
        return float("inf") if any(x is None for x in dist) else max(dist)


def radius_graph(s: Simplex, eps: float = DEFAULT_TOL.geom_eps) -> RadiusGraph:
    """Graph on the sphere-touching vertices; i ~ j when P_j lies in H(C, P_i)."""
    m = s.meb
    V = s.points
    touching = np.abs(np.linalg.norm(V - m.center, axis=1) - m.radius) <= SUPPORT_EPS
    nodes = V[touching]
    if len(nodes) == 0:
        raise PathError("no sphere-touching vertices")
    G = (nodes - m.center) @ (nodes - m.center).T
    n = len(nodes)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if G[i, j] <= eps]
    return RadiusGraph(nodes, edges, m.center)


# --------------------------------------------------------------------------- simplices


def _apex_for(points, a, b):
    """The point farthest from the line ab."""
    d = b - a
    d = d / np.linalg.norm(d)
    off = (points - a) - np.outer((points - a) @ d, d)
    k = int(np.argmax(np.linalg.norm(off, axis=1)))
    if np.linalg.norm(off[k]) < 1e-12:
        raise PathError("body is contained in a line")
    return points[k]


def simplex_reacher(s: Simplex, tol: Tolerances = DEFAULT_TOL) -> CoreReacher:
    """Reacher for a simplex of radius one and dimension at least two.

    The m.e.b. center lies in the relative interior of the face spanned by the
    vertices with positive barycentric weight; that face is either a diameter
    (handled through a non-acute triangle with a third vertex) or a well-centered
    simplex of its own.
    """
    m = s.meb
    if abs(m.radius - 1.0) > SUPPORT_EPS:
        raise PathError(f"simplex radius {m.radius} is not 1")
    if affine_rank(s.points) < 2:
        raise PathError("simplex must have dimension at least 2")
    lam = s.barycentric(m.center)
    face = np.flatnonzero(lam > 1e-9)
    core = s.points[face]
    if len(face) == 2:
        apex = _apex_for(s.points, core[0], core[1])
        return CoreReacher(core, m.center, apex=apex, tol=tol)
    return CoreReacher(core, m.center, tol=tol)


def simplex_path(s: Simplex, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    u, v = np.asarray(u, float), np.asarray(v, float)
    for w in (u, v):
        if not s.contains(w, tol.geom_eps):
            raise ValueError("endpoint outside the simplex")
    if np.array_equal(u, v):
        return StepPath.at(u)
    return simplex_reacher(s, tol).path(u, v)


def obtuse_triangle_path(T, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path between two points of a non-acute triangle of radius one."""
    S = T if isinstance(T, Simplex) else Simplex(T)
    P = S.points
    if len(P) != 3:
        raise ValueError("need a triangle")
    sides = [np.linalg.norm(P[(i + 1) % 3] - P[(i + 2) % 3]) for i in range(3)]
    k = int(np.argmax(sides))
    a, b = P[(k + 1) % 3], P[(k + 2) % 3]
    if np.dot(a - P[k], b - P[k]) > 1e-12:
        raise ValueError("triangle is not obtuse")
    if abs(sides[k] / 2 - 1.0) > SUPPORT_EPS:
        raise ValueError(f"triangle radius {sides[k] / 2} is not 1")
    u, v = np.asarray(u, float), np.asarray(v, float)
    for w in (u, v):
        if not S.contains(w, tol.geom_eps):
            raise ValueError("endpoint outside the triangle")
    if np.array_equal(u, v):
        return StepPath.at(u)
    reacher = CoreReacher([a, b], (a + b) / 2, apex=P[k], tol=tol)
    return reacher.path(u, v)

