"""Convex bodies, minimum enclosing balls and the predicates built on them.

Every bounded body here is the convex hull of finitely many points, so its radius
(the radius of its minimum enclosing ball) is the m.e.b. radius of its vertices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import ConvexHull, QhullError

from .geometry import DEFAULT_TOL, Ball, as_point

__all__ = [
    "MebResult",
    "meb",
    "convex_weights",
    "in_convex_hull",
    "caratheodory",
    "affine_rank",
    "Hyperrectangle",
    "Simplex",
    "VPolytope",
    "Cone",
    "Placed",
    "radius",
    "is_meb_by_seidel",
    "is_well_centered",
    "affine_dimension",
    "scale_body",
    "body_from_json",
    "body_to_json",
]

SUPPORT_EPS = 1e-7
MEB_SEED = 20210617


# --------------------------------------------------------------------------- hull algebra


def affine_rank(points, eps: float = 1e-9) -> int:
    """Affine dimension of a finite point set (rank of the difference vectors)."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if len(P) <= 1:
        return 0
    D = P[1:] - P[0]
    s = np.linalg.svd(D, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > eps * max(1.0, s[0])))


def convex_weights(points, x) -> tuple[np.ndarray, float]:
    """Nonnegative weights summing (approximately) to one that best reproduce ``x``.

    Returns ``(weights, residual)``; the residual is zero exactly when ``x`` lies in the
    convex hull. Solved as a nonnegative least-squares problem with a heavily weighted
    sum-to-one row, centred at ``x`` so the residual measures a distance.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.asarray(x, dtype=float)
    Y = P - x
    w = 10.0 * max(1.0, float(np.max(np.linalg.norm(Y, axis=1))))
    A = np.vstack([Y.T, w * np.ones(len(P))])
    b = np.concatenate([np.zeros(P.shape[1]), [w]])
    lam, res = nnls(A, b, maxiter=50 * (len(P) + 5))
    return lam, float(res)


def in_convex_hull(points, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
    return convex_weights(points, x)[1] <= eps


def caratheodory(points, weights, drop: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a convex combination to affinely independent points.

    Returns ``(indices, weights)`` of at most ``affine_rank + 1`` points with the same
    weighted sum.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    lam = np.asarray(weights, dtype=float).copy()
    lam[lam < drop] = 0.0
    idx = np.flatnonzero(lam)
    lam = lam[idx]
    while len(idx) > 1:
        M = np.vstack([P[idx].T, np.ones(len(idx))])
        _, s, vt = np.linalg.svd(M)
        rank = int(np.sum(s > 1e-10 * max(1.0, s[0])))
        if rank >= len(idx):
            break
        mu = vt[-1]
        if mu.max() <= 0:
            mu = -mu
        pos = mu > 1e-14
        alpha = np.min(lam[pos] / mu[pos])
        lam = lam - alpha * mu
        keep = lam > drop
        idx, lam = idx[keep], lam[keep]
    lam = lam / lam.sum()
    return idx, lam


# --------------------------------------------------------------------------- m.e.b.


@dataclass(frozen=True)
class MebResult:
    center: np.ndarray
    radius: float
    support: np.ndarray

    @property
    def ball(self) -> Ball:
        return Ball(self.center, self.radius)


def _circumball(B: list, d: int):
    if not B:
        return None, -1.0
    p0 = B[0]
    if len(B) == 1:
        return p0.copy(), 0.0
    U = np.array(B[1:]) - p0
    A = 2.0 * U @ U.T
    rhs = np.sum(U * U, axis=1)
    alpha = np.linalg.lstsq(A, rhs, rcond=None)[0]
    c = p0 + alpha @ U
    r2 = max(float(np.sum((q - c) ** 2)) for q in B)
    return c, r2


def _inside(p, c, r2) -> bool:
    if c is None:
        return False
    r = np.sqrt(r2)
    return float(np.linalg.norm(p - c)) <= r + 1e-12 * max(1.0, r)


def _welzl_mtf(pts: list, n: int, bnd: list, d: int):
    c, r2 = _circumball(bnd, d)
    if len(bnd) == d + 1:
        return c, r2
    for i in range(n):
        p = pts[i]
        if not _inside(p, c, r2):
            c, r2 = _welzl_mtf(pts, i, bnd + [p], d)
            pts.insert(0, pts.pop(i))
    return c, r2


def meb(points, seed: int = MEB_SEED) -> MebResult:
    """Minimum enclosing ball by Welzl's recursion with move-to-front.

    The input is shuffled with a fixed seed, so the result is deterministic for a
    given input order.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0 or len(P) == 0:
        raise ValueError("meb of an empty point set")
    if not np.all(np.isfinite(P)):
        raise ValueError("points must be finite")
    d = P.shape[1]
    order = np.random.default_rng(seed).permutation(len(P))
    pts = [P[i] for i in order]
    c, _ = _welzl_mtf(pts, len(pts), [], d)
    dist = np.linalg.norm(P - c, axis=1)
    r = float(dist.max())
    support = P[np.abs(dist - r) <= SUPPORT_EPS]
    return MebResult(c, r, support)


# --------------------------------------------------------------------------- bodies


class _Body:
    """Shared behaviour of the hull-generated bodies."""

    bounded = True

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @cached_property
    def meb(self) -> MebResult:
        return meb(self.vertices)

    @property
    def radius(self) -> float:
        return self.meb.radius

    def affine_dimension(self) -> int:
        return affine_rank(self.vertices)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        V = self.vertices
        return V.min(axis=0), V.max(axis=0)


@dataclass(frozen=True, eq=False)
class Hyperrectangle(_Body):
    """R^d(l) = prod [0, l_i], anchored at the origin."""

    l: np.ndarray

    def __post_init__(self):
        l = np.asarray(self.l, dtype=float)
        if l.ndim != 1 or l.size < 1 or np.any(l < 0) or not np.all(np.isfinite(l)):
            raise ValueError("side lengths must be a nonempty vector of nonnegative reals")
        object.__setattr__(self, "l", l)

    @property
    def dim(self) -> int:
        return self.l.size

    @cached_property
    def vertices(self) -> np.ndarray:
        if self.dim > 16:
            raise ValueError("vertex enumeration is limited to d <= 16")
        corners = np.array(list(itertools.product([0.0, 1.0], repeat=self.dim)))
        return corners * self.l

    @cached_property
    def meb(self) -> MebResult:
        # the circumscribed ball of a box is its m.e.b.
        return MebResult(self.l / 2, float(np.linalg.norm(self.l) / 2), self.vertices)

    @property
    def center(self) -> np.ndarray:
        return self.l / 2

    def affine_dimension(self) -> int:
        return int(np.sum(self.l > 1e-12))

    def bounding_box(self):
        return np.zeros(self.dim), self.l.copy()

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps):
        x = np.asarray(x, dtype=float)
        ok = (x >= -eps) & (x <= self.l + eps)
        return np.all(ok, axis=-1)

    def distance_outside(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(np.maximum(0, -x) + np.maximum(0, x - self.l), axis=-1)


@dataclass(frozen=True, eq=False)
class Simplex(_Body):
    """Convex hull of n+1 affinely independent points in R^d (n <= d)."""

    points: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.points, dtype=float))
        if V.ndim != 2 or len(V) < 1 or not np.all(np.isfinite(V)):
            raise ValueError("simplex needs a (n+1, d) vertex array")
        if len(V) > V.shape[1] + 1 or affine_rank(V) != len(V) - 1:
            raise ValueError("simplex vertices must be affinely independent")
        object.__setattr__(self, "points", V)

    @property
    def vertices(self) -> np.ndarray:
        return self.points

    @cached_property
    def _bary(self):
        V = self.points
        E = V[1:] - V[0]
        if len(E) == 0:
            return np.zeros((self.dim, 0)), np.zeros((self.dim, 1))
        G = np.linalg.pinv(E)  # (d, n)
        grads = np.hstack([-G.sum(axis=1, keepdims=True), G])
        return G, grads

    def barycentric(self, x) -> np.ndarray:
        """Barycentric coordinates of the projection of ``x`` onto the affine hull."""
        x = np.asarray(x, dtype=float)
        G, _ = self._bary
        tail = (x - self.points[0]) @ G
        head = 1.0 - tail.sum(axis=-1, keepdims=True)
        return np.concatenate([head, tail], axis=-1)

    def facet_slack(self, x) -> np.ndarray:
        """Signed distances (within the affine hull) from x to each facet; >= 0 inside."""
        _, grads = self._bary
        norms = np.linalg.norm(grads, axis=0)
        norms[norms == 0] = 1.0
        return self.barycentric(x) / norms

    def offset(self, x) -> np.ndarray:
        """Distance from x to the affine hull."""
        x = np.asarray(x, dtype=float)
        lam = self.barycentric(x)
        proj = lam @ self.points
        return np.linalg.norm(x - proj, axis=-1)

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps):
        x = np.asarray(x, dtype=float)
        if len(self.points) == 1:
            return np.linalg.norm(x - self.points[0], axis=-1) <= eps
        ok_facets = np.all(self.facet_slack(x) >= -eps, axis=-1)
        return ok_facets & (self.offset(x) <= eps)


@dataclass(frozen=True, eq=False)
class VPolytope(_Body):
    """Convex hull of a finite point set."""

    points: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.points, dtype=float))
        if V.ndim != 2 or len(V) < 1 or not np.all(np.isfinite(V)):
            raise ValueError("polytope needs a (m, d) vertex array")
        object.__setattr__(self, "points", V)

    @property
    def vertices(self) -> np.ndarray:
        return self.points

    @cached_property
    def _facets(self):
        # full-dimensional hulls get an H-description for fast membership
        V = self.points
        if self.dim < 2 or affine_rank(V) < self.dim:
            return None
        try:
            hull = ConvexHull(V)
        except QhullError:
            return None
        eq = hull.equations
        return eq[:, :-1], eq[:, -1]

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps):
        x = np.asarray(x, dtype=float)
        f = self._facets
        if f is not None:
            A, b = f
            return np.all(x @ A.T + b <= eps, axis=-1)
        if x.ndim == 1:
            return in_convex_hull(self.points, x, eps)
        return np.array([in_convex_hull(self.points, xi, eps) for xi in x])


@dataclass(frozen=True, eq=False)
class Cone:
    """Affine cone ``apex + {sum mu_i g_i : mu >= 0}``; unbounded unless all g_i vanish."""

    apex: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        a = as_point(self.apex)
        G = np.asarray(self.generators, dtype=float).reshape(-1, a.size)
        object.__setattr__(self, "apex", a)
        object.__setattr__(self, "generators", G)

    @property
    def dim(self) -> int:
        return self.apex.size

    @property
    def bounded(self) -> bool:
        return len(self.generators) == 0 or np.allclose(self.generators, 0)

    @property
    def radius(self) -> float:
        return 0.0 if self.bounded else float("inf")

    def affine_dimension(self) -> int:
        if self.bounded:
            return 0
        return int(np.linalg.matrix_rank(self.generators, tol=1e-9))

    def _coeffs(self, x):
        y = np.asarray(x, dtype=float) - self.apex
        mu, res = nnls(self.generators.T, y)
        return mu, res

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps):
        x = np.asarray(x, dtype=float)
        if self.bounded:
            return np.linalg.norm(x - self.apex, axis=-1) <= eps
        if x.ndim == 1:
            return self._coeffs(x)[1] <= eps
        return np.array([self._coeffs(xi)[1] <= eps for xi in x])

    def truncation(self, *pts, min_radius: float = 1.0) -> VPolytope:
        """A bounded piece ``apex + conv(0, T g_i)`` containing ``pts`` with radius >= min_radius."""
        T = 1.0
        for p in pts:
            mu, res = self._coeffs(p)
            if res > 1e-7:
                raise ValueError("point outside cone")
            T = max(T, float(mu.sum()) * (1 + 1e-9))
        while True:
            body = VPolytope(np.vstack([self.apex, self.apex + T * self.generators]))
            if body.radius >= min_radius:
                return body
            T *= 2.0


@dataclass(frozen=True, eq=False)
class Placed:
    """A body moved by a rigid motion: world = rotation @ local + translation."""

    body: object
    rotation: np.ndarray
    translation: np.ndarray = field(default=None)

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float)
        d = self.body.dim
        if R.shape != (d, d) or not np.allclose(R @ R.T, np.eye(d), atol=1e-9):
            raise ValueError("rotation must be an orthogonal d x d matrix")
        t = np.zeros(d) if self.translation is None else as_point(self.translation, d)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def bounded(self) -> bool:
        return self.body.bounded

    def to_world(self, x):
        return np.asarray(x, dtype=float) @ self.rotation.T + self.translation

    def to_local(self, x):
        return (np.asarray(x, dtype=float) - self.translation) @ self.rotation

    @property
    def vertices(self) -> np.ndarray:
        return self.to_world(self.body.vertices)

    @cached_property
    def meb(self) -> MebResult:
        m = self.body.meb
        return MebResult(self.to_world(m.center), m.radius, self.to_world(m.support))

    @property
    def radius(self) -> float:
        return self.body.radius

    def affine_dimension(self) -> int:
        return self.body.affine_dimension()

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps):
        return self.body.contains(self.to_local(x), eps)

    def bounding_box(self):
        V = self.vertices
        return V.min(axis=0), V.max(axis=0)


# --------------------------------------------------------------------------- queries


def radius(body) -> float:
    return float(body.radius)


def affine_dimension(body) -> int:
    return int(body.affine_dimension())


def is_meb_by_seidel(points_on_sphere, candidate: Ball, eps: float = SUPPORT_EPS) -> bool:
    """Seidel's criterion: the sphere's ball is the m.e.b. iff its center is in the hull."""
    P = np.atleast_2d(np.asarray(points_on_sphere, dtype=float))
    d = np.linalg.norm(P - candidate.center, axis=1)
    if np.any(np.abs(d - candidate.radius) > eps):
        raise ValueError("a point is off the candidate sphere")
    return convex_weights(P, candidate.center)[1] <= eps


def is_well_centered(s: Simplex, eps: float = DEFAULT_TOL.geom_eps) -> bool:
    if len(s.points) < 2:
        raise ValueError("degenerate simplex")
    lam = s.barycentric(s.meb.center)
    return bool(np.all(lam > eps))


def scale_body(body, lam: float):
    if lam < 0:
        raise ValueError("scale factor must be nonnegative")
    if isinstance(body, Hyperrectangle):
        return Hyperrectangle(body.l * lam)
    if isinstance(body, Simplex):
        try:
            return Simplex(body.points * lam)
        except ValueError:  # collapsed below the rank tolerance
            return VPolytope(body.points * lam)
    if isinstance(body, VPolytope):
        return VPolytope(body.points * lam)
    if isinstance(body, Cone):
        return Cone(body.apex * lam, body.generators * (lam > 0))
    if isinstance(body, Placed):
        return Placed(scale_body(body.body, lam), body.rotation, body.translation)
    raise TypeError(f"cannot scale {type(body).__name__}")


# --------------------------------------------------------------------------- JSON


def body_from_json(desc) -> object:
    if isinstance(desc, str):
        desc = json.loads(desc)
    if not isinstance(desc, dict) or "type" not in desc:
        raise ValueError("body descriptor must be an object with a 'type'")
    kind = desc["type"].lower()
    if kind == "hyperrectangle":
        body = Hyperrectangle(desc["l"])
    elif kind == "hypercube":
        body = Hyperrectangle(np.full(int(desc["d"]), float(desc["l"])))
    elif kind == "simplex":
        body = Simplex(desc["vertices"])
    elif kind == "vpolytope":
        body = VPolytope(desc["vertices"])
    elif kind == "cone":
        body = Cone(desc["apex"], desc.get("generators", []))
    else:
        raise ValueError(f"unknown body type {desc['type']!r}")
    if "rotation" in desc or "translation" in desc:
        R = desc.get("rotation", np.eye(body.dim))
        body = Placed(body, R, desc.get("translation"))
    return body


def body_to_json(body) -> dict:
    if isinstance(body, Placed):
        out = body_to_json(body.body)
        out["rotation"] = body.rotation.tolist()
        out["translation"] = body.translation.tolist()
        return out
    if isinstance(body, Hyperrectangle):
        return {"type": "hyperrectangle", "l": body.l.tolist()}
    if isinstance(body, Simplex):
        return {"type": "simplex", "vertices": body.points.tolist()}
    if isinstance(body, VPolytope):
        return {"type": "vpolytope", "vertices": body.points.tolist()}
    if isinstance(body, Cone):
        return {"type": "cone", "apex": body.apex.tolist(),
                "generators": body.generators.tolist()}
    raise TypeError(f"cannot serialise {type(body).__name__}")
