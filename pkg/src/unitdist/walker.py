"""Random walks with unit steps inside a convex body.

At every step the walker picks a direction uniformly among those whose unit step
stays in the body (by convexity the whole chord then stays inside too). In 2D the
feasible directions of a polygon are computed exactly: the edge with unit normal
``n`` and slack ``s`` forbids the open arc of half-width ``arccos(s)`` around the
angle of ``n``; what remains is a union of arcs, and gaps shorter than 1e-9 rad are
treated as single directions (atoms). In 3D directions are drawn by rejection.

Every run owns an RNG stream derived from ``(seed, run)``, so ensembles do not
depend on execution order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull
from scipy.stats import ks_2samp

from .bodies import Hyperrectangle, Placed
from .geometry import DEFAULT_TOL

__all__ = [
    "ATOM_GAP",
    "MAX_REJECTIONS",
    "WalkConfig",
    "FeasibleDirections",
    "WalkEnsemble",
    "halfspaces",
    "feasible_directions",
    "step_sample",
    "run_ensemble",
    "histogram2d",
    "radial_ks",
    "ensemble_csv",
    "histogram_csv",
    "heatmap_svg",
]

TWO_PI = 2.0 * math.pi
ATOM_GAP = 1e-9
SLACK_PAD = 1e-12
MAX_REJECTIONS = 1_000_000


@dataclass(frozen=True)
class WalkConfig:
    body: object
    start: np.ndarray
    steps: int
    runs: int
    seed: int = 0
    keep_trajectories: bool = False

    def __post_init__(self):
        object.__setattr__(self, "start", np.asarray(self.start, float))
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if self.runs < 1:
            raise ValueError("runs must be at least one")
        if self.start.shape != (self.body.dim,):
            raise ValueError("start dimension does not match the body")
        if not self.body.contains(self.start, DEFAULT_TOL.geom_eps):
            raise ValueError("start lies outside the body")


@dataclass
class FeasibleDirections:
    """Unit steps available from a point.

    ``arcs`` holds angle intervals ``(t0, t1)`` (2D only; None in 3D where the set
    is only known to be a nonempty union of caps); ``atoms`` holds isolated unit
    directions.
    """

    kind: str  # "continuous-arcs", "finite-set" or "empty"
    arcs: list | None = None
    atoms: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.arcs) if self.arcs else 0.0


@dataclass
class WalkEnsemble:
    final_positions: np.ndarray
    status: np.ndarray
    stuck_step: np.ndarray
    config: WalkConfig
    trajectories: np.ndarray | None = None

    @property
    def runs(self) -> int:
        return len(self.final_positions)

    def metadata(self) -> dict:
        c = self.config
        return {"start": c.start.tolist(), "steps": c.steps, "runs": c.runs, "seed": c.seed,
                "stuck": int(np.sum(self.status != "ok"))}


# --------------------------------------------------------------------------- geometry


def halfspaces(body) -> tuple[np.ndarray, np.ndarray]:
    """``(A, b)`` with unit-norm rows such that the body is ``{x : A x <= b}``."""
    if isinstance(body, Hyperrectangle):
        d = body.dim
        A = np.vstack([np.eye(d), -np.eye(d)])
        return A, np.concatenate([body.l, np.zeros(d)])
    if isinstance(body, Placed):
        A, b = halfspaces(body.body)
        A2 = A @ body.rotation.T
        return A2, b + A2 @ body.translation
    V = np.asarray(body.vertices, float)
    try:
        hull = ConvexHull(V)
    except Exception as exc:  # qhull raises for flat inputs
        raise ValueError("walker needs a full-dimensional body") from exc
    eq = hull.equations
    return eq[:, :-1], -eq[:, -1]


def _forbidden(A, b, P):
    """Center angles and half-widths of the forbidden arcs for each row of P."""
    S = b[None, :] - P @ A.T
    w = np.arccos(np.clip(S + SLACK_PAD, -1.0, 1.0))
    psi = np.arctan2(A[:, 1], A[:, 0])
    return np.broadcast_to(psi, S.shape), w


def _gaps(psi, w):
    """Feasible gaps for each row: ``(ref, starts, lengths, valid, full, free)``.

    Angles are measured from ``ref`` (the start of the first active arc) so that no
    gap wraps around. ``full`` marks rows whose circle is entirely forbidden and
    ``free`` rows with no forbidden arc at all.
    """
    R, m = w.shape
    active = w > 0
    full = np.any(w >= math.pi, axis=1)
    free = ~active.any(axis=1)
    first = np.argmax(active, axis=1)
    rows = np.arange(R)
    ref = psi[rows, first] - w[rows, first]
    a = np.mod(psi - w - ref[:, None], TWO_PI)
    a[rows, first] = 0.0
    e = a + 2 * w
    wrap = active & (e > TWO_PI)
    dummy = TWO_PI
    s1 = np.where(active, a, dummy)
    e1 = np.where(active, np.minimum(e, TWO_PI), dummy)
    s2 = np.where(wrap, 0.0, dummy)
    e2 = np.where(wrap, e - TWO_PI, dummy)
    d_on = active.astype(np.int8)
    d_wrap = wrap.astype(np.int8)
    # starts first so ties between an end and a start leave no gap
    T = np.concatenate([s1, s2, e1, e2], axis=1)
    D = np.concatenate([d_on, d_wrap, -d_on, -d_wrap], axis=1)
    order = np.argsort(T, axis=1, kind="stable")
    T = np.take_along_axis(T, order, axis=1)
    D = np.take_along_axis(D, order, axis=1)
    C = np.cumsum(D, axis=1)
    T_next = np.concatenate([T[:, 1:], np.full((R, 1), TWO_PI)], axis=1)
    valid = (C == 0) & (T < TWO_PI) & ~full[:, None]
    lengths = np.where(valid, T_next - T, 0.0)
    return ref, T, lengths, valid, full, free


def _directions_2d(A, b, P):
    psi, w = _forbidden(A, b, P)
    ref, T, L, valid, full, free = _gaps(psi, w)
    arc = valid & (L >= ATOM_GAP)
    atom = valid & (L < ATOM_GAP)
    return ref, T, L, arc, atom, full, free


def feasible_directions(body, p) -> FeasibleDirections:
    """Exact feasible unit steps from p (2D polygons) or an emptiness check (3D)."""
    p = np.asarray(p, float)
    if p.shape != (body.dim,):
        raise ValueError("point dimension does not match the body")
    if not body.contains(p, DEFAULT_TOL.geom_eps):
        raise ValueError("point lies outside the body")
    d = body.dim
    if d == 2:
        A, b = halfspaces(body)
        ref, T, L, arc, atom, full, free = _directions_2d(A, b, p[None, :])
        if free[0]:
            return FeasibleDirections("continuous-arcs", [(0.0, TWO_PI)], np.zeros((0, 2)))
        arcs = [(float(ref[0] + T[0, j]), float(ref[0] + T[0, j] + L[0, j])) for j in np.flatnonzero(arc[0])]
        ang = ref[0] + T[0, atom[0]] + L[0, atom[0]] / 2
        atoms = np.column_stack([np.cos(ang), np.sin(ang)])
        if arcs:
            return FeasibleDirections("continuous-arcs", arcs, atoms)
        if len(atoms):
            return FeasibleDirections("finite-set", [], atoms)
        return FeasibleDirections("empty", [], np.zeros((0, 2)))
    if d == 3:
        V = np.asarray(body.vertices, float)
        dist = np.linalg.norm(V - p, axis=1)
        if dist.max() < 1.0 - DEFAULT_TOL.geom_eps:
            return FeasibleDirections("empty", None, np.zeros((0, 3)))
        if dist.max() <= 1.0 + DEFAULT_TOL.geom_eps:
            # only the farthest vertices touch the unit sphere
            U = V[np.abs(dist - 1.0) <= DEFAULT_TOL.geom_eps] - p
            return FeasibleDirections("finite-set", None, U / np.linalg.norm(U, axis=1, keepdims=True))
        return FeasibleDirections("continuous-arcs", None, np.zeros((0, 3)))
    raise ValueError("feasible directions are implemented for d = 2 and d = 3")


def step_sample(fd: FeasibleDirections, rng: np.random.Generator) -> np.ndarray:
    """One uniformly chosen unit offset from a 2D feasible set."""
    if fd.kind == "empty":
        raise ValueError("no feasible direction (stuck)")
    u = rng.random()
    if fd.kind == "finite-set":
        return fd.atoms[min(int(u * len(fd.atoms)), len(fd.atoms) - 1)]
    if fd.arcs is None:
        raise ValueError("3D feasible sets are sampled by rejection in run_ensemble")
    lengths = np.array([b - a for a, b in fd.arcs])
    cum = np.cumsum(lengths)
    x = u * cum[-1]
    j = min(int(np.searchsorted(cum, x, side="right")), len(cum) - 1)
    t = fd.arcs[j][0] + (x - (cum[j] - lengths[j]))
    return np.array([math.cos(t), math.sin(t)])


# --------------------------------------------------------------------------- ensembles


def _streams(seed: int, runs: int):
    return [np.random.default_rng(np.random.SeedSequence([int(seed), r])) for r in range(runs)]


def _run_2d(cfg: WalkConfig, A, b):
    R, S = cfg.runs, cfg.steps
    U = np.array([g.random(S) for g in _streams(cfg.seed, R)]).reshape(R, S)
    P = np.tile(cfg.start, (R, 1))
    status = np.full(R, "ok", dtype=object)
    stuck = np.full(R, -1, dtype=int)
    traj = np.empty((R, S + 1, 2)) if cfg.keep_trajectories else None
    if traj is not None:
        traj[:, 0] = P
    alive = np.ones(R, bool)
    for k in range(S):
        idx = np.flatnonzero(alive)
        if len(idx) == 0:
            if traj is not None:
                traj[:, k + 1] = P
            continue
        ref, T, L, arc, atom, full, free = _directions_2d(A, b, P[idx])
        u = U[idx, k]
        La = np.where(arc, L, 0.0)
        total = La.sum(axis=1)
        n_atoms = atom.sum(axis=1)
        theta = np.full(len(idx), np.nan)
        # continuous: inverse CDF over the arc lengths
        cont = (total > 0) & ~free
        if cont.any():
            cum = np.cumsum(La[cont], axis=1)
            x = np.minimum(u[cont] * total[cont], np.nextafter(total[cont], 0))
            # first slot whose cumulative length passes x (always a positive-length arc)
            j = np.argmax(cum > x[:, None], axis=1)
            rows = np.arange(len(j))
            before = cum[rows, j] - La[cont][rows, j]
            theta[cont] = ref[cont] + T[cont][rows, j] + (x - before)
        disc = ~cont & ~free & (n_atoms > 0)
        if disc.any():
            pick = np.minimum((u[disc] * n_atoms[disc]).astype(int), n_atoms[disc] - 1)
            ai = atom[disc]
            order = np.cumsum(ai, axis=1) - 1
            col = np.argmax(ai & (order == pick[:, None]), axis=1)
            rows = np.arange(len(col))
            theta[disc] = ref[disc] + T[disc][rows, col] + L[disc][rows, col] / 2
        theta[free] = TWO_PI * u[free]
        dead = np.isnan(theta)
        if dead.any():
            gone = idx[dead]
            status[gone] = "stuck"
            stuck[gone] = k + 1
            alive[gone] = False
        move = idx[~dead]
        step = np.column_stack([np.cos(theta[~dead]), np.sin(theta[~dead])])
        newP = P[move] + step
        # containment and unit length are checked as we go
        viol = newP @ A.T - b
        if np.any(viol > DEFAULT_TOL.geom_eps):
            raise RuntimeError("walker left the body")
        if np.any(np.abs(np.linalg.norm(newP - P[move], axis=1) - 1.0) > DEFAULT_TOL.geom_eps):
            raise RuntimeError("walker made a non-unit step")
        P[move] = newP
        if traj is not None:
            traj[:, k + 1] = P
    return P, status, stuck, traj


def _run_3d(cfg: WalkConfig, A, b):
    R, S, d = cfg.runs, cfg.steps, cfg.body.dim
    V = np.asarray(cfg.body.vertices, float)
    P = np.tile(cfg.start, (R, 1))
    status = np.full(R, "ok", dtype=object)
    stuck = np.full(R, -1, dtype=int)
    traj = np.empty((R, S + 1, d)) if cfg.keep_trajectories else None
    for r, g in enumerate(_streams(cfg.seed, R)):
        p = cfg.start.copy()
        if traj is not None:
            traj[r, 0] = p
        for k in range(S):
            if status[r] == "ok":
                if np.linalg.norm(V - p, axis=1).max() < 1.0 - DEFAULT_TOL.geom_eps:
                    status[r], stuck[r] = "stuck", k + 1
                else:
                    tries, found = 0, None
                    while found is None and tries < MAX_REJECTIONS:
                        n = min(4096, MAX_REJECTIONS - tries)
                        Z = g.standard_normal((n, d))
                        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
                        ok = np.all((p + Z) @ A.T - b <= DEFAULT_TOL.geom_eps, axis=1)
                        if ok.any():
                            found = Z[np.argmax(ok)]
                        tries += n
                    if found is None:
                        status[r], stuck[r] = "stuck-numeric", k + 1
                    else:
                        p = p + found
            if traj is not None:
                traj[r, k + 1] = p
        P[r] = p
    return P, status, stuck, traj


def run_ensemble(cfg: WalkConfig) -> WalkEnsemble:
    """Run ``cfg.runs`` independent walks of ``cfg.steps`` steps from ``cfg.start``."""
    A, b = halfspaces(cfg.body)
    if cfg.body.dim == 2:
        P, status, stuck, traj = _run_2d(cfg, A, b)
    elif cfg.body.dim == 3:
        P, status, stuck, traj = _run_3d(cfg, A, b)
    else:
        raise ValueError("walks are implemented for d = 2 and d = 3")
    return WalkEnsemble(P, status.astype(str), stuck, cfg, traj)


# --------------------------------------------------------------------------- statistics and output


def _square_extent(body):
    lo, hi = body.bounding_box()
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    side = float(np.max(hi - lo))
    return lo, side


def histogram2d(ens: WalkEnsemble, bins: int = 50) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frequencies on a bins x bins grid over the body's bounding square: ``(H, xedges, yedges)``."""
    if ens.config.body.dim != 2:
        raise ValueError("histogram2d needs a 2D ensemble")
    lo, side = _square_extent(ens.config.body)
    xe = lo[0] + side * np.linspace(0, 1, bins + 1)
    ye = lo[1] + side * np.linspace(0, 1, bins + 1)
    P = ens.final_positions
    H, _, _ = np.histogram2d(P[:, 0], P[:, 1], bins=[xe, ye])
    return H / max(1, len(P)), xe, ye


def radial_ks(a: WalkEnsemble, b: WalkEnsemble, origin=None) -> float:
    """Sup-distance between the CDFs of the distance to ``origin`` (default: the start)."""
    o = a.config.start if origin is None else np.asarray(origin, float)
    ra = np.linalg.norm(a.final_positions - o, axis=1)
    rb = np.linalg.norm(b.final_positions - o, axis=1)
    return float(ks_2samp(ra, rb).statistic)


def ensemble_csv(ens: WalkEnsemble) -> str:
    d = ens.final_positions.shape[1]
    names = ["x", "y", "z"][:d]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run_index", "step", *names, "status"])
    if ens.trajectories is not None:
        for r, tr in enumerate(ens.trajectories):
            for k, p in enumerate(tr):
                w.writerow([r, k, *map(repr, map(float, p)), ens.status[r]])
    else:
        for r, p in enumerate(ens.final_positions):
            k = ens.config.steps if ens.stuck_step[r] < 0 else ens.stuck_step[r] - 1
            w.writerow([r, k, *map(repr, map(float, p)), ens.status[r]])
    return buf.getvalue()


def histogram_csv(H: np.ndarray, xe: np.ndarray, ye: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x0", "x1", "y0", "y1", "frequency"])
    for i in range(H.shape[0]):
        for j in range(H.shape[1]):
            w.writerow([repr(float(xe[i])), repr(float(xe[i + 1])), repr(float(ye[j])),
                        repr(float(ye[j + 1])), repr(float(H[i, j]))])
    return buf.getvalue()


def heatmap_svg(H: np.ndarray, size: int = 500, start=None, extent=None) -> str:
    """Grayscale heatmap (darker = more frequent); the square is scaled to the picture."""
    n = H.shape[0]
    cell = size / n
    top = H.max() if H.max() > 0 else 1.0
    rects = []
    for i in range(n):
        for j in range(H.shape[1]):
            if H[i, j] <= 0:
                continue
            g = int(round(255 * (1 - H[i, j] / top)))
            y = size - (j + 1) * cell
            rects.append(f'<rect x="{i * cell:.3f}" y="{y:.3f}" width="{cell:.3f}" height="{cell:.3f}" '
                         f'fill="rgb({g},{g},{g})"/>')
    marker = ""
    if start is not None and extent is not None:
        lo, side = extent
        sx = (start[0] - lo[0]) / side * size
        sy = size - (start[1] - lo[1]) / side * size
        marker = f'<circle cx="{sx:.3f}" cy="{sy:.3f}" r="{max(2.0, size / 100):.3f}" fill="red"/>'
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">',
        f'<rect width="{size}" height="{size}" fill="white" stroke="black"/>',
        *rects,
        marker,
        "</svg>",
        "",
    ])
