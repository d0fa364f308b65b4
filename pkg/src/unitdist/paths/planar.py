"""Planar constructions: rectangle wiggling and reaching the base of a triangle.

All constructions work in a canonical 2D frame where the base runs from
``P0 = (0, 0)`` to ``P1 = (L, 0)`` and the region lies in ``y >= 0``; a
:class:`Frame2D` carries results back to R^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bodies import Simplex
from ..geometry import DEFAULT_TOL, NoCrossingError, Tolerances, unit_point_on_curve
from .steppath import PathError, StepPath

__all__ = [
    "Frame2D",
    "Region2D",
    "wiggle_advance",
    "rectangle_wiggle_bound",
    "rectangle_wiggle_path",
    "BaseReach",
    "triangle_wiggle_path",
]

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Frame2D:
    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def from_base(cls, p0, p1, toward) -> "Frame2D":
        """Frame with p0 at the origin, p1 on the positive x-axis and ``toward`` at y > 0."""
        p0 = np.asarray(p0, float)
        e1 = np.asarray(p1, float) - p0
        e1 = e1 / np.linalg.norm(e1)
        w = np.asarray(toward, float) - p0
        w = w - np.dot(w, e1) * e1
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise PathError("frame needs a point off the base line")
        return cls(p0, e1, w / nw)

    def world(self, a, b=None) -> np.ndarray:
        if b is None:
            a, b = a
        return self.origin + a * self.e1 + b * self.e2

    def local(self, x) -> np.ndarray:
        y = np.asarray(x, float) - self.origin
        return np.array([np.dot(y, self.e1), np.dot(y, self.e2)])


class Region2D:
    """Convex polygon ``{p : N p <= c}`` with unit normals."""

    def __init__(self, N, c):
        N = np.asarray(N, float).reshape(-1, 2)
        c = np.asarray(c, float).reshape(-1)
        norms = np.linalg.norm(N, axis=1)
        keep = norms > 1e-14
        self.N = N[keep] / norms[keep, None]
        self.c = c[keep] / norms[keep]

    @classmethod
    def triangle(cls, a, b, c) -> "Region2D":
        pts = [np.asarray(p, float) for p in (a, b, c)]
        e, f = pts[1] - pts[0], pts[2] - pts[0]
        orient = np.sign(e[0] * f[1] - e[1] * f[0])
        if orient == 0:
            raise PathError("degenerate triangle")
        N, off = [], []
        for i in range(3):
            p, q = pts[i], pts[(i + 1) % 3]
            e = (q - p) * orient
            n = np.array([e[1], -e[0]])
            N.append(n)
            off.append(np.dot(n, p))
        return cls(N, off)

    @classmethod
    def slice_of(cls, simplex: Simplex, frame: Frame2D) -> "Region2D":
        """The simplex cut by the frame's plane (which must lie in its affine hull)."""
        _, grads = simplex._bary
        lam0 = simplex.barycentric(frame.origin)
        ga = frame.e1 @ grads
        gb = frame.e2 @ grads
        return cls(np.column_stack([-ga, -gb]), lam0)

    def contains(self, p, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return bool(np.all(self.N @ np.asarray(p, float) - self.c <= eps))

    def ymax(self, a: float) -> float:
        """Largest y with (a, y) in the region, assuming the region meets x = a."""
        if not hasattr(self, "_upper"):
            up = self.N[:, 1] > 1e-14
            self._upper = [(float(c), float(nx), float(ny))
                           for c, nx, ny in zip(self.c[up], self.N[up, 0], self.N[up, 1])]
        return min(((c - nx * a) / ny for c, nx, ny in self._upper), default=math.inf)

    def arc_inside(self, center, t0: float, t1: float, eps: float = 0.0) -> bool:
        """Whether the unit arc ``center + (cos t, sin t)``, t between t0 and t1, is inside."""
        lo, hi = min(t0, t1), max(t0, t1)
        center = np.asarray(center, float)
        for n, c in zip(self.N, self.c):
            psi = math.atan2(n[1], n[0])
            k = math.ceil((lo - psi) / TWO_PI)
            if psi + k * TWO_PI <= hi:
                best = 1.0
            else:
                best = max(math.cos(lo - psi), math.cos(hi - psi))
            if np.dot(n, center) + best > c + eps:
                return False
        return True


# --------------------------------------------------------------------------- wiggling


def wiggle_advance(h: float) -> float:
    """How far one 4-step wiggle cycle moves along the base of a height-h rectangle."""
    if h >= 1:
        return 2.0
    return 2.0 * (1.0 - math.sqrt(1.0 - h * h))


def rectangle_wiggle_bound(x_extent: float, h: float) -> int:
    if h >= 1:
        return 2
    return 4 * math.ceil(x_extent / wiggle_advance(h))


def _wiggle_points(u: float, v: float, h: float) -> tuple[list, list]:
    if u == v:
        return [np.array([u, 0.0])], []
    if u > v:
        pts, labels = _wiggle_points(v, u, h)
        return pts[::-1], labels[::-1]
    if h >= 1:
        half = (v - u) / 2
        apex = np.array([u + half, math.sqrt(max(0.0, 1.0 - half * half))])
        return [np.array([u, 0.0]), apex, np.array([v, 0.0])], ["wiggle"] * 2
    qmax = wiggle_advance(h)
    cycles = max(1, math.ceil((v - u) / qmax * (1 - 1e-12)))
    q = (v - u) / cycles
    lift = math.sqrt(max(0.0, 1.0 - (1.0 - q / 2) ** 2))
    pts = [np.array([u, 0.0])]
    for k in range(cycles):
        p = u + k * q
        nxt = v if k == cycles - 1 else p + q
        pts += [
            np.array([p + 1.0, 0.0]),
            np.array([p + q / 2, lift]),
            np.array([p + q / 2 + 1.0, lift]),
            np.array([nxt, 0.0]),
        ]
    return pts, ["wiggle"] * (4 * cycles)


def rectangle_wiggle_path(x_extent: float, h: float, u: float, v: float) -> StepPath:
    """Unit-step path from (u, 0) to (v, 0) inside ``[0, 1 + x_extent] x [0, h]``.

    Uses at most 2 steps when h >= 1 and otherwise at most
    ``4 * ceil(x_extent / (2 (1 - sqrt(1 - h^2))))`` steps: each cycle goes right by
    one, back up-left onto the circle, right by one, and down onto the target.
    """
    if not 0 <= x_extent <= 1:
        raise ValueError("x_extent must lie in [0, 1]")
    if h <= 0:
        raise ValueError("h must be positive")
    for w in (u, v):
        if not -1e-12 <= w <= x_extent + 1e-12:
            raise ValueError("u and v must lie in [0, x_extent]")
    pts, labels = _wiggle_points(float(u), float(v), h)
    return StepPath(pts, labels)


# --------------------------------------------------------------------------- base reach


class BaseReach:
    """Reach points on the base of a planar convex region from an anchor A.

    The anchor sits at unit distance from both base endpoints ``P0`` and ``P1``
    (``|P0 P1| = L = 1 + x`` with ``1 < L <= 2``); when ``L == 2`` it is the base
    midpoint. From A one can reach a neighbourhood ``[0, r]`` of P0 through P1 and a
    point on a short arc of the unit circle about P1 (and symmetrically near P1),
    translate those by one, and wiggle across the rest.
    """

    def __init__(self, frame: Frame2D, length: float, region: Region2D,
                 tol: Tolerances = DEFAULT_TOL, eps0: float = 0.25):
        if not 1.0 < length <= 2.0 + 1e-9:
            raise PathError(f"base length {length} outside (1, 2]")
        self.frame = frame
        self.L = min(float(length), 2.0)
        self.x = self.L - 1.0
        self.region = region
        self.tol = tol
        half = self.L / 2
        self.A = np.array([half, math.sqrt(max(0.0, 1.0 - half * half))])
        self.P0 = np.array([0.0, 0.0])
        self.P1 = np.array([self.L, 0.0])
        # angle of A seen from P1 and from P0
        self.phi1 = math.atan2(self.A[1], self.A[0] - self.L)
        self.phi0 = math.atan2(self.A[1], self.A[0])
        self.delta1 = self._arc_width(self.P1, self.phi1, -1.0, eps0)
        self.delta0 = self._arc_width(self.P0, self.phi0, +1.0, eps0)
        c1 = self.P1 + np.array([math.cos(self.phi1 - self.delta1), math.sin(self.phi1 - self.delta1)])
        c0 = self.P0 + np.array([math.cos(self.phi0 + self.delta0), math.sin(self.phi0 + self.delta0)])
        self.r = float(np.linalg.norm(c1 - self.P0)) - 1.0
        self.r_prime = float(np.linalg.norm(c0 - self.P1)) - 1.0
        self.x_wiggle = self.x - self.r - self.r_prime

    def _arc_width(self, center, phi, sign, eps0) -> float:
        # halve the chord length until the arc fits, then grow it back to the largest fit
        def fits(delta):
            return self.region.arc_inside(center, phi, phi + sign * delta, eps=1e-13)

        eps = eps0
        for _ in range(80):
            delta = 2.0 * math.asin(min(1.0, eps / 2.0))
            if fits(delta):
                break
            eps /= 2.0
        else:
            raise PathError("anchor arc never fits inside the region")
        lo, hi = delta, math.pi / 2
        if fits(hi):
            return hi
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if fits(mid):
                lo = mid
            else:
                hi = mid
        return lo

    def _headroom(self, m: float) -> float:
        # usable height for a wiggle cycle whose raised points sit above m and m + 1
        return min(self.region.ymax(m), self.region.ymax(m + 1.0)) * (1.0 - 1e-9)

    def _cycle_advance(self, p: float, limit: float) -> float:
        """Largest advance q <= limit for a wiggle cycle starting at (p, 0).

        The headroom is concave in the cycle position, so checking the raised
        points against the headroom at p and at p + q / 2 is enough.
        """
        def ok(q):
            lift = math.sqrt(max(0.0, 1.0 - (1.0 - q / 2) ** 2))
            return lift <= min(self._headroom(p), self._headroom(p + q / 2))

        h0 = self._headroom(p)
        q0 = min(limit, wiggle_advance(min(1.0, h0)))
        # by concavity the headroom at p + q1 / 2 is at least the one used for q1
        q = min(limit, wiggle_advance(min(1.0, h0, self._headroom(p + q0 / 2))))
        if ok(q):
            return q
        lo, hi = 0.0, q
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if ok(mid):
                lo = mid
            else:
                hi = mid
        if lo <= 1e-12:
            raise PathError("no room to wiggle along the base")
        return lo

    def _wiggle_cost(self, u: float, v: float, n: int = 64) -> float:
        # rough cycle count: integral of 1 / advance(headroom) over [u, v]
        lo, hi = min(u, v), max(u, v)
        if hi - lo <= 0:
            return 0.0
        m = np.linspace(lo, hi, n)
        H = np.array([min(1.0, max(self._headroom(t), 1e-12)) for t in m])
        return float(np.mean(1.0 / (2.0 * (1.0 - np.sqrt(1.0 - H * H)))) * (hi - lo))

    def _wiggle_local(self, u: float, v: float) -> StepPath:
        if u > v:
            return self._wiggle_local(v, u).reversed()
        pts = [np.array([u, 0.0])]
        p = u
        while v - p > 1e-15:
            q = self._cycle_advance(p, min(v - p, 2.0))
            nxt = v if v - (p + q) <= 1e-15 else p + q
            q = nxt - p
            lift = math.sqrt(max(0.0, 1.0 - (1.0 - q / 2) ** 2))
            pts += [
                np.array([p + 1.0, 0.0]),
                np.array([p + q / 2, lift]),
                np.array([p + q / 2 + 1.0, lift]),
                np.array([nxt, 0.0]),
            ]
            p = nxt
            if len(pts) > 400_000:
                raise PathError("wiggle needs too many steps")
        return StepPath(pts, ["wiggle"] * (len(pts) - 1))

    def _near(self, b: float) -> bool:
        return abs(math.hypot(b - self.A[0], self.A[1]) - 1.0) <= self.tol.bisect_eps

    def _arc_route(self, b: float, via_p1: bool) -> StepPath:
        target = np.array([b, 0.0])
        if via_p1:
            center, phi, end = self.P1, self.phi1, self.phi1 - self.delta1
        else:
            center, phi, end = self.P0, self.phi0, self.phi0 + self.delta0

        def arc(t):
            return center + np.array([math.cos(t), math.sin(t)])

        _, y = unit_point_on_curve(target, arc, phi, end, self.tol)
        return StepPath([self.A, center, y, target], ["corner", "arc-hop", "arc-hop"])

    def reach_local(self, b: float) -> StepPath:
        """Path (in frame coordinates) from A to the base point (b, 0)."""
        eps = 1e-12
        b = min(max(float(b), 0.0), self.L)
        if self._near(b):
            return StepPath([self.A, np.array([b, 0.0])], ["corner"])
        if b <= self.r + eps:
            return self._arc_route(b, via_p1=True)
        if b >= self.L - self.r_prime - eps:
            return self._arc_route(b, via_p1=False)
        if b <= self.x + eps:
            b = min(b, self.x)
            if b >= self.x - self.r_prime:
                return self.reach_local(b + 1.0).to([b, 0.0], "translate")
            # wiggle in from whichever covered end is cheaper
            left, right = self.r, self.x - self.r_prime
            start = left if self._wiggle_cost(left, b) <= self._wiggle_cost(b, right) else right
            return self.reach_local(start).extend(self._wiggle_local(start, b))
        if b >= 1.0 - eps:
            return self.reach_local(max(b - 1.0, 0.0)).to([b, 0.0], "translate")
        raise PathError(f"base point {b} not covered (x = {self.x})")

    def reach(self, b: float) -> StepPath:
        return self.reach_local(b).map(self.frame.world)

    def base_param(self, p) -> float:
        return float(self.frame.local(p)[0])


def triangle_wiggle_path(T, A, u, v, tol: Tolerances = DEFAULT_TOL) -> StepPath:
    """Path between two points of the base ``P0 P1`` of triangle ``T`` through its interior.

    ``T`` lists ``P0, P1, P2``; ``A`` must be at unit distance from ``P0`` and ``P1``
    and inside ``T``; ``u`` and ``v`` lie on ``P0 P1`` within distance ``|P0 P1| - 1``
    of ``P0``.
    """
    S = T if isinstance(T, Simplex) else Simplex(T)
    if len(S.points) != 3:
        raise ValueError("need a triangle")
    P0, P1, P2 = S.points
    A = np.asarray(A, float)
    if abs(np.linalg.norm(A - P0) - 1) > 1e-7 or abs(np.linalg.norm(A - P1) - 1) > 1e-7:
        raise ValueError("A must be at unit distance from P0 and P1")
    if not S.contains(A, tol.geom_eps):
        raise ValueError("A must lie in the triangle")
    L = float(np.linalg.norm(P1 - P0))
    frame = Frame2D.from_base(P0, P1, P2)
    region = Region2D.triangle(*(frame.local(p) for p in (P0, P1, P2)))
    reach = BaseReach(frame, L, region, tol)
    out = []
    for w in (u, v):
        w = np.asarray(w, float)
        loc = frame.local(w)
        if abs(loc[1]) > 1e-9 or not -1e-9 <= loc[0] <= reach.x + 1e-9:
            raise ValueError("u and v must lie on P0P1 within distance |P0P1| - 1 of P0")
        out.append(reach.reach(loc[0]))
    if np.allclose(out[0].end, out[1].end, atol=1e-15):
        return StepPath.at(np.asarray(u, float))
    return out[0].reversed().extend(out[1]).shortcut()
