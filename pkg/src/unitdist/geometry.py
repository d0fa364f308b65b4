"""Primitive geometry in R^d and the bisection solvers that locate unit-distance points.

Points are plain ``numpy`` float arrays. Every constructive path in the package
eventually calls one of the ``unit_point_on_*`` helpers: given a query point x and
a continuous curve along which ``d(x, .) - 1`` changes sign, find a curve point at
distance exactly 1 from x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "NoCrossingError",
    "as_point",
    "distance",
    "Ball",
    "Sphere",
    "HalfSpace",
    "Segment",
    "Arc",
    "halfspace_contains",
    "unit_point_on_curve",
    "unit_point_on_segment",
    "unit_point_on_polyline",
    "unit_point_on_arc",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used throughout.

    geom_eps is the membership / unit-length slack, bisect_eps the resolution of
    the curve parameter in bisection (relative to the curve's parameter range).
    """

    geom_eps: float = 1e-9
    bisect_eps: float = 1e-12

    def __post_init__(self):
        if not (0 < self.bisect_eps < self.geom_eps < 1):
            raise ValueError("need 0 < bisect_eps < geom_eps < 1")


DEFAULT_TOL = Tolerances()


class NoCrossingError(ValueError):
    """Raised when a curve carries no point at unit distance from the query."""


def as_point(p, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"a point needs shape (d,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and arr.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {arr.size}")
    return arr


def distance(p, q) -> float:
    p = as_point(p)
    q = as_point(q, p.size)
    return float(np.linalg.norm(p - q))


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return distance(self.center, x) <= self.radius + eps


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def on(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return abs(distance(self.center, x) - self.radius) <= eps


@dataclass(frozen=True)
class HalfSpace:
    """H(P, Q): the closed half-space through ``base`` perpendicular to PQ, away from Q."""

    base: np.ndarray
    direction_witness: np.ndarray

    def __post_init__(self):
        b = as_point(self.base)
        w = as_point(self.direction_witness, b.size)
        if np.array_equal(b, w):
            raise ValueError("half-space needs Q != P")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "direction_witness", w)

    def signed(self, x) -> float:
        x = as_point(x, self.base.size)
        return float(np.dot(self.direction_witness - self.base, x - self.base))


def halfspace_contains(h: HalfSpace, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
    return h.signed(x) <= eps


@dataclass(frozen=True)
class Segment:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_point(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", as_point(self.b, a.size))

    def at(self, t: float) -> np.ndarray:
        return self.a + t * (self.b - self.a)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))


@dataclass(frozen=True)
class Arc:
    """Circular arc ``center + radius * (cos t * e1 + sin t * e2)`` for t in [t0, t1].

    ``e1`` and ``e2`` are orthonormal and span the arc's plane, so the arc may live in
    any R^d with d >= 2.
    """

    center: np.ndarray
    radius: float
    e1: np.ndarray
    e2: np.ndarray
    t0: float
    t1: float

    def at(self, t: float) -> np.ndarray:
        return self.center + self.radius * (np.cos(t) * self.e1 + np.sin(t) * self.e2)

    @property
    def start(self) -> np.ndarray:
        return self.at(self.t0)

    @property
    def end(self) -> np.ndarray:
        return self.at(self.t1)

    @classmethod
    def from_endpoints(cls, sphere: Sphere, start, end, toward=None) -> "Arc":
        """Arc on ``sphere`` from ``start`` to ``end`` inside the plane they span.

        For antipodal endpoints the plane is ambiguous; ``toward`` (a direction)
        picks it and also the side the arc bulges to.
        """
        c = sphere.center
        s = as_point(start, c.size) - c
        e = as_point(end, c.size) - c
        r = sphere.radius
        if r <= 0:
            raise ValueError("arc needs a positive radius")
        if abs(np.linalg.norm(s) - r) > 1e-7 or abs(np.linalg.norm(e) - r) > 1e-7:
            raise ValueError("arc endpoints must lie on the sphere")
        e1 = s / np.linalg.norm(s)
        if toward is not None:
            w = as_point(toward, c.size)
        else:
            w = e
        w = w - np.dot(w, e1) * e1
        if np.linalg.norm(w) < 1e-12:
            w = e - np.dot(e, e1) * e1
        if np.linalg.norm(w) < 1e-12:
            if np.linalg.norm(e / r - e1) < 1e-12:
                # zero-length arc
                w = np.eye(c.size)[np.argmin(np.abs(e1))]
                w = w - np.dot(w, e1) * e1
            else:
                raise ValueError("antipodal endpoints need a 'toward' direction")
        e2 = w / np.linalg.norm(w)
        t1 = float(np.arctan2(np.dot(e, e2), np.dot(e, e1)))
        if t1 < 0:
            t1 += 2 * np.pi
        return cls(c, r, e1, e2, 0.0, t1)


def unit_point_on_curve(
    x,
    curve: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, np.ndarray]:
    """Bisect ``t -> d(x, curve(t)) - 1`` on [t0, t1]; return ``(t, curve(t))``.

    An endpoint already within ``bisect_eps`` of unit distance is returned as is.
    Without a sign change an endpoint within ``geom_eps`` is still accepted;
    otherwise :class:`NoCrossingError` is raised.
    """
    x = np.asarray(x, dtype=float)

    def f(t):
        return float(np.linalg.norm(curve(t) - x)) - 1.0

    fa, fb = f(t0), f(t1)
    if abs(fa) <= tol.bisect_eps:
        return t0, curve(t0)
    if abs(fb) <= tol.bisect_eps:
        return t1, curve(t1)
    if (fa > 0) == (fb > 0):
        if min(abs(fa), abs(fb)) <= tol.geom_eps:
            t = t0 if abs(fa) <= abs(fb) else t1
            return t, curve(t)
        raise NoCrossingError("no IVT crossing on the curve")
    lo, hi = t0, t1
    width = abs(t1 - t0) * tol.bisect_eps
    flo = fa
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid, curve(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if abs(hi - lo) <= width:
            break
    t = lo if abs(f(lo)) <= abs(f(hi)) else hi
    return t, curve(t)


def unit_point_on_segment(x, s: Segment, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    x = as_point(x, s.a.size)
    return unit_point_on_curve(x, s.at, 0.0, 1.0, tol)[1]


def unit_point_on_polyline(x, pts: Sequence, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """First unit-distance point along the polyline, scanning segments in order."""
    pts = [as_point(p) for p in pts]
    x = as_point(x, pts[0].size)
    if len(pts) == 1:
        if abs(np.linalg.norm(pts[0] - x) - 1.0) <= tol.geom_eps:
            return pts[0]
        raise NoCrossingError("single vertex is not at unit distance")
    for a, b in zip(pts[:-1], pts[1:]):
        try:
            return unit_point_on_segment(x, Segment(a, b), tol)
        except NoCrossingError:
            continue
    raise NoCrossingError("no IVT crossing on any polyline segment")


def unit_point_on_arc(x, arc: Arc, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    x = as_point(x, arc.center.size)
    return unit_point_on_curve(x, arc.at, arc.t0, arc.t1, tol)[1]
