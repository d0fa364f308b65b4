"""Short paths in boxes whose m.e.b. has radius one (``|l| = 2``).

Boxes are ``prod [0, l_i]`` with center ``M = l / 2``; every construction builds a
path from M to a point and joins two of them at M.

* face method (longest side at most sqrt(3)): each point is one step from a point
  on an edge, and each edge point is three steps from M through a vertex;
* wiggle method (2D, short side below one): reach the bottom edge from the origin
  corner by wiggling, and the arc about ``(l1, 0)`` through that corner;
* diagonal method (any d): route both ends onto the main diagonal and walk inside
  the 2D rectangle spanned by a split of the coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..bodies import Hyperrectangle
from ..geometry import DEFAULT_TOL, Segment, Tolerances, unit_point_on_curve, unit_point_on_polyline, unit_point_on_segment
from .planar import rectangle_wiggle_path, wiggle_advance
from .steppath import PathError, StepPath, join_at_center

__all__ = [
    "DiameterBound",
    "rectangle_bound",
    "hypercube_bound",
    "hyperrectangle_bound",
    "best_split",
    "face_reach",
    "hypercube_path",
    "rectangle2d_path",
    "diagonal_reach",
    "hyperrectangle_path",
    "box_reach",
]

RADIUS_TOL = 1e-7
SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DiameterBound:
    """An upper bound on the graph diameter and the formula it came from."""

    bound: int | str
    formula_id: str
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"bound": self.bound, "formula_id": self.formula_id,
                "parameters": dict(self.parameters)}


def _check_radius_one(l) -> np.ndarray:
    l = np.asarray(l, float)
    if np.any(l < 0):
        raise ValueError("side lengths must be nonnegative")
    if abs(np.linalg.norm(l) - 2.0) > RADIUS_TOL:
        raise ValueError(f"|l| = {np.linalg.norm(l):.9g}, need |l| = 2")
    return l


def rectangle_bound(l1: float, l2: float) -> DiameterBound:
    """Diameter bound for the 2D rectangle with ``l1^2 + l2^2 = 4``."""
    l1, l2 = max(l1, l2), min(l1, l2)
    if abs(math.hypot(l1, l2) - 2.0) > RADIUS_TOL:
        raise ValueError("rectangle bound needs sqrt(l1^2 + l2^2) = 2")
    if l2 >= 1.0:
        return DiameterBound(8, "rectangle-l2-ge-1", {"l1": l1, "l2": l2})
    if l2 <= 0:
        return DiameterBound("unbounded", "rectangle-degenerate", {"l1": l1, "l2": l2})
    K = math.ceil((l1 - 1.0) / wiggle_advance(l2))
    return DiameterBound(4 + 8 * K, "rectangle-wiggle", {"l1": l1, "l2": l2})


def hypercube_bound(d: int) -> DiameterBound:
    if d < 2:
        raise ValueError("hypercube bound needs d >= 2")
    return DiameterBound(8, "hypercube", {"d": d, "l": 2 / math.sqrt(d)})


def _split_lengths(l, I) -> tuple[float, float]:
    mask = np.zeros(len(l), bool)
    mask[list(I)] = True
    return float(np.linalg.norm(l[mask])), float(np.linalg.norm(l[~mask]))


def _split_cost(l, I) -> float:
    a, b = _split_lengths(l, I)
    if min(a, b) <= 0:
        return math.inf
    bd = rectangle_bound(a, b).bound
    return math.inf if bd == "unbounded" else bd


def best_split(l) -> tuple[int, ...]:
    """Index set I minimising the 2D bound (exhaustive for d <= 20, greedy beyond).

    Ties go to the most balanced split, i.e. the larger shorter side.
    """
    l = np.asarray(l, float)
    d = len(l)
    if d < 2:
        raise ValueError("need at least two coordinates")
    if d <= 20:
        best, best_key = None, (math.inf, 0.0)
        rest = range(1, d)
        for k in range(0, d - 1):
            for extra in itertools.combinations(rest, k):
                I = (0,) + extra
                key = (_split_cost(l, I), -min(_split_lengths(l, I)))
                if key < best_key:
                    best, best_key = I, key
        if best is None:
            raise ValueError("box has fewer than two positive sides")
        return best
    # balanced greedy on squared lengths
    order = np.argsort(-l ** 2)
    I, s_in, s_out = [], 0.0, 0.0
    for i in order:
        if s_in <= s_out:
            I.append(int(i))
            s_in += l[i] ** 2
        else:
            s_out += l[i] ** 2
    return tuple(sorted(I))


def hyperrectangle_bound(l, I=None) -> DiameterBound:
    l = _check_radius_one(l)
    if I is None:
        I = best_split(l)
    a, b = _split_lengths(l, I)
    if min(a, b) <= 0:
        raise ValueError("split must leave positive length on both sides")
    inner = rectangle_bound(a, b)
    bound = "unbounded" if inner.bound == "unbounded" else inner.bound + 2
    return DiameterBound(bound, "hyperrectangle-diagonal",
                         {"l1'": max(a, b), "l2'": min(a, b), "I": list(I), "inner": inner.formula_id})


# --------------------------------------------------------------------------- face method


def _vertex_edge_reach(l, M, V, k: int, t: float) -> StepPath:
    """M -> vertex V -> L -> V + t e_k (or shorter when the edge point is V itself)."""
    P = V.copy()
    sign = 1.0 if V[k] == 0 else -1.0
    P[k] = V[k] + sign * t
    if t <= 1e-15:
        return StepPath([M, V], ["corner"])
    others = np.ones(len(l), bool)
    others[k] = False
    s2 = float(np.sum(l[others] ** 2))
    tau = math.sqrt(max(0.0, 1.0 - t * t / 4) / s2)
    if tau > 1.0 + 1e-12:
        raise PathError("side too long for the face method")
    tau = min(tau, 1.0)
    # L sits over the middle of V P, lifted toward the opposite vertex
    Lp = V + np.where(V > 0, -1.0, 1.0) * tau * l
    Lp[k] = V[k] + sign * t / 2
    return StepPath([M, V, Lp, P], ["corner", "lift", "edge"])


def face_reach(l, z, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path of at most 4 steps from the box center to z (needs max l_i <= sqrt 3)."""
    l = _check_radius_one(l)
    if l.max() > SQRT3 + 1e-12:
        raise PathError("face method needs every side at most sqrt(3)")
    z = np.asarray(z, float)
    M = l / 2
    if np.linalg.norm(z - M) <= 1e-13:
        return StepPath.at(M)
    # nearest vertex V (within 1), opposite vertex V' (at least 1 away)
    V = np.where(z <= M, 0.0, l)
    if np.linalg.norm(z - V) <= 1e-13:
        return StepPath([M, z], ["corner"])
    if abs(np.linalg.norm(z - V) - 1.0) <= tol.bisect_eps:
        return StepPath([M, V, z], ["corner", "corner-hop"])
    Vp = l - V
    poly = [V.copy()]
    cur = V.copy()
    for k in range(len(l)):
        if l[k] == 0:
            continue
        cur = cur.copy()
        cur[k] = Vp[k]
        poly.append(cur)
    P2 = unit_point_on_polyline(z, poly, tol)
    # locate the edge that carries P2
    for a, b in zip(poly[:-1], poly[1:]):
        k = int(np.flatnonzero(a != b)[0])
        off = np.delete(P2 - a, k)
        lo, hi = min(a[k], b[k]), max(a[k], b[k])
        if np.all(np.abs(off) <= 1e-12) and lo - 1e-12 <= P2[k] <= hi + 1e-12:
            break
    else:
        raise PathError("edge point not on the polyline")
    # pick the edge end nearer to P2 as the base vertex
    W = a if abs(P2[k] - a[k]) <= abs(P2[k] - b[k]) else b
    t = abs(P2[k] - W[k])
    path = _vertex_edge_reach(l, M, W.astype(float), k, t)
    path.points[-1] = P2
    if np.linalg.norm(z - P2) <= 1e-13:
        return path
    return path.to(z, "edge-hop")


def _check_inside(l, *pts):
    box = Hyperrectangle(l)
    for p in pts:
        if not box.contains(p, DEFAULT_TOL.geom_eps):
            raise ValueError("endpoint outside the box")


def hypercube_path(d: int, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """At most 8 unit steps between two points of the cube of side 2 / sqrt(d)."""
    if d < 2:
        raise ValueError("hypercube path needs d >= 2")
    l = np.full(d, 2.0 / math.sqrt(d))
    u, v = np.asarray(u, float), np.asarray(v, float)
    if u.shape != (d,) or v.shape != (d,):
        raise ValueError("dimension mismatch")
    _check_inside(l, u, v)
    if np.array_equal(u, v):
        return StepPath.at(u)
    return join_at_center(face_reach(l, u, tol), face_reach(l, v, tol))


# --------------------------------------------------------------------------- 2D rectangles


def _wiggle_reach(l1: float, l2: float, z, tol: Tolerances) -> StepPath:
    """Path from M to z for the rectangle [0,l1] x [0,l2] with l2 < 1."""
    M = np.array([l1 / 2, l2 / 2])
    z = np.asarray(z, float)
    if np.linalg.norm(z - M) <= 1e-13:
        return StepPath.at(M)
    # reflect z into the quadrant x >= l1/2, y >= l2/2
    fx, fy = z[0] < l1 / 2, z[1] < l2 / 2

    def reflect(p):
        p = np.array(p, float)
        if fx:
            p[0] = l1 - p[0]
        if fy:
            p[1] = l2 - p[1]
        return p

    w = reflect(z)
    x = l1 - 1.0
    theta_m = math.atan2(l2 / 2, -l1 / 2)

    # origin -> (x, 0) along the bottom edge, then up the arc about (l1, 0) to M
    def curve(s):
        if s <= 1.0:
            return np.array([s * x, 0.0])
        t = math.pi + (s - 1.0) * (theta_m - math.pi)
        return np.array([l1 + math.cos(t), math.sin(t)])

    s, y = unit_point_on_curve(w, curve, 0.0, 2.0, tol)
    if s <= 1.0:
        path = StepPath([M, np.zeros(2)], ["corner"])
        if y[0] > 0:
            path.extend(rectangle_wiggle_path(x, l2, 0.0, min(y[0], x)))
            path.points[-1] = y
    else:
        path = StepPath([M, np.array([l1, 0.0]), y], ["corner", "arc-hop"])
    if np.linalg.norm(path.end - w) > 1e-13:
        path.to(w, "arc-hop" if s > 1.0 else "edge-hop")
    return path.map(reflect)


def _rect_reach(l1: float, l2: float, z, tol: Tolerances) -> StepPath:
    if l2 >= 1.0:
        return face_reach(np.array([l1, l2]), z, tol)
    return _wiggle_reach(l1, l2, z, tol)


def rectangle2d_path(l1: float, l2: float, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path in ``[0,l1] x [0,l2]`` (``l1^2 + l2^2 = 4``) within the rectangle bound.

    The construction runs along the longer side; for ``l1 < l2`` the axes are swapped.
    """
    if l1 < l2:
        u, v = np.asarray(u, float), np.asarray(v, float)
        return rectangle2d_path(l2, l1, u[::-1], v[::-1], tol).map(lambda p: p[::-1])
    if l2 <= 0:
        raise ValueError("need l2 > 0")
    _check_radius_one([l1, l2])
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_inside(np.array([l1, l2]), u, v)
    if np.array_equal(u, v):
        return StepPath.at(u)
    return join_at_center(_rect_reach(l1, l2, u, tol), _rect_reach(l1, l2, v, tol))


# --------------------------------------------------------------------------- hyperrectangles


def _on_diag(z, l) -> bool:
    t = float(np.dot(z, l) / np.dot(l, l))
    return np.linalg.norm(t * l - z) <= 1e-13


def diagonal_reach(l, z, I=None, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path from the box center to z through the 2D rectangle of the split I.

    The box contains the rectangle with corner 0 spanned by ``a = sum_{i in I} l_i e_i``
    and ``b = l - a``; its diagonal is the box diagonal. z is one step from a point of
    the diagonal (on the half toward 0 or toward l, whichever has z in its half-space),
    which is reached inside the rectangle.
    """
    l = _check_radius_one(l)
    z = np.asarray(z, float)
    M = l / 2
    if np.linalg.norm(z - M) <= 1e-13:
        return StepPath.at(M)
    if I is None:
        I = best_split(l)
    mask = np.zeros(len(l), bool)
    mask[list(I)] = True
    a = np.where(mask, l, 0.0)
    b = l - a
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if min(na, nb) <= 0:
        raise ValueError("split must leave positive length on both sides")
    # rectangle coordinates, long side first
    if na >= nb:
        E, l1, l2 = np.stack([a / na, b / nb]), na, nb
    else:
        E, l1, l2 = np.stack([b / nb, a / na]), nb, na
    if _on_diag(z, l):
        y = z
    else:
        V = np.zeros(len(l)) if np.dot(z - M, -M) <= 0 else l
        y = unit_point_on_segment(z, Segment(M, V), tol)
    p = np.clip(E @ y, 0.0, [l1, l2])
    path = _rect_reach(l1, l2, p, tol).map(lambda q: q @ E)
    path.points[0], path.points[-1] = M, y
    if y is not z:
        path.to(z, "diagonal-hop")
    return path


def hyperrectangle_path(l, u, v, I=None, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path in R^d(l), ``|l| = 2``, of at most ``rectangle bound + 2`` steps (diagonal method)."""
    l = _check_radius_one(l)
    u, v = np.asarray(u, float), np.asarray(v, float)
    _check_inside(l, u, v)
    if np.array_equal(u, v):
        return StepPath.at(u)
    if I is None:
        I = best_split(l)
    return join_at_center(diagonal_reach(l, u, I, tol), diagonal_reach(l, v, I, tol))


def box_reach(l, z, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Hub path from the center of a radius-one box, by the method with the smaller bound."""
    l = _check_radius_one(l)
    pos = np.flatnonzero(l > 0)
    if len(pos) == 2:
        i, j = pos if l[pos[0]] >= l[pos[1]] else pos[::-1]
        E = np.zeros((2, len(l)))
        E[0, i] = E[1, j] = 1.0
        z = np.asarray(z, float)
        path = _rect_reach(l[i], l[j], E @ z, tol).map(lambda q: q @ E)
        path.points[-1] = z
        return path
    if l.max() <= SQRT3:
        return face_reach(l, z, tol)
    return diagonal_reach(l, z, None, tol)
