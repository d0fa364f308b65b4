"""Brute-force evidence: approximate unit-distance graphs on grids over 2D/3D bodies.

Nodes are the points of the grid ``origin + h * Z^d`` inside the body. Two nodes are
adjacent when their distance is within ``delta`` of one, so the edge set is a fixed
integer stencil of offsets ``o`` with ``| |o| h - 1 | <= delta``. Graphs are stored
implicitly (mask plus stencil); BFS runs level by level with FFT dilation.

Grid disconnection is never proof of disconnection of the continuous graph: slack
edges both add and miss connections.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .geometry import DEFAULT_TOL

__all__ = [
    "GridGraph",
    "OracleReport",
    "Violation",
    "build_grid_graph",
    "bfs_distance",
    "bfs_levels",
    "witness_path",
    "reachable_set",
    "grid_components",
    "validate_path",
    "oracle_report",
]

MAX_NODES = 2_000_000


def _stencil(h: float, delta: float, d: int) -> np.ndarray:
    R = int(math.floor((1.0 + delta) / h))
    rng = np.arange(-R, R + 1)
    grid = np.array(np.meshgrid(*([rng] * d), indexing="ij")).reshape(d, -1).T
    dist = np.linalg.norm(grid * h, axis=1)
    return grid[np.abs(dist - 1.0) <= delta]


@dataclass
class GridGraph:
    """Implicit epsilon-unit-distance graph on the grid nodes inside a body."""

    h: float
    delta: float
    origin: np.ndarray
    mask: np.ndarray
    offsets: np.ndarray
    body: object = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.mask.ndim

    @property
    def shape(self) -> tuple:
        return self.mask.shape

    @property
    def n_nodes(self) -> int:
        return int(self.mask.sum())

    @property
    def nodes(self) -> np.ndarray:
        return self.coords(np.argwhere(self.mask))

    @property
    def n_edges(self) -> int:
        total = 0
        for o in self.offsets:
            a, b = _overlap(self.shape, o)
            total += int(np.sum(self.mask[a] & self.mask[b]))
        return total // 2

    def coords(self, idx) -> np.ndarray:
        return self.origin + self.h * np.asarray(idx, float)

    def kernel(self) -> np.ndarray:
        R = int(np.abs(self.offsets).max()) if len(self.offsets) else 0
        K = np.zeros((2 * R + 1,) * self.dim)
        K[tuple((self.offsets + R).T)] = 1.0
        return K

    def inside(self, idx) -> bool:
        idx = tuple(int(i) for i in idx)
        if any(i < 0 or i >= n for i, n in zip(idx, self.shape)):
            return False
        return bool(self.mask[idx])

    def neighbors(self, idx) -> np.ndarray:
        cand = np.asarray(idx, int) + self.offsets
        ok = np.all((cand >= 0) & (cand < np.array(self.shape)), axis=1)
        cand = cand[ok]
        return cand[self.mask[tuple(cand.T)]]

    def snap(self, p) -> tuple:
        """Nearest inside node; ties go to the lexicographically smallest index."""
        p = np.asarray(p, float)
        if p.shape != (self.dim,):
            raise ValueError("point dimension does not match the grid")
        if self.body is not None and not self.body.contains(p, DEFAULT_TOL.geom_eps):
            raise ValueError("point lies outside the body")
        c = np.round((p - self.origin) / self.h).astype(int)
        K = 1
        while True:
            best = self._nearest_in_box(p, c, K)
            if best is not None:
                dist, _ = best
                K2 = int(math.ceil(dist / self.h)) + 1
                if K2 > K:
                    best = self._nearest_in_box(p, c, K2)
                return best[1]
            if K > max(self.shape):
                raise ValueError("grid has no nodes")
            K *= 2

    def _nearest_in_box(self, p, c, K):
        lo = np.maximum(c - K, 0)
        hi = np.minimum(c + K + 1, np.array(self.shape))
        if np.any(hi <= lo):
            return None
        sub = self.mask[tuple(slice(a, b) for a, b in zip(lo, hi))]
        idx = np.argwhere(sub) + lo
        if len(idx) == 0:
            return None
        dist = np.linalg.norm(self.coords(idx) - p, axis=1)
        m = dist.min()
        tied = idx[dist <= m + 1e-12 * max(1.0, m)]
        order = np.lexsort(tied.T[::-1])
        return float(m), tuple(int(i) for i in tied[order[0]])


def _overlap(shape, o):
    """Slices a, b with ``b`` the slice ``a`` shifted by offset o."""
    a, b = [], []
    for n, k in zip(shape, o):
        if k >= 0:
            a.append(slice(0, n - k))
            b.append(slice(k, n))
        else:
            a.append(slice(-k, n))
            b.append(slice(0, n + k))
    return tuple(a), tuple(b)


def build_grid_graph(body, h: float, delta: float | None = None, max_nodes: int = MAX_NODES,
                     allow_coarse: bool = False) -> GridGraph:
    """Grid graph of spacing h and edge slack delta (default 2h) over a body with d <= 3.

    ``delta >= h sqrt(d)`` is required so every true unit step between grid cells is
    representable; ``allow_coarse`` lifts that check for deliberately thin graphs.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if not getattr(body, "bounded", True):
        raise ValueError("the grid oracle needs a bounded body")
    d = body.dim
    if d > 3:
        raise ValueError("the grid oracle supports d <= 3")
    if delta is None:
        delta = 2.0 * h
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not allow_coarse and delta < h * math.sqrt(d) - 1e-15:
        raise ValueError(f"delta = {delta} is below h * sqrt(d) = {h * math.sqrt(d)}")
    lo, hi = body.bounding_box()
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    shape = tuple(int(math.floor((b - a) / h + 1e-9)) + 1 for a, b in zip(lo, hi))
    total = int(np.prod(shape))
    if total > max_nodes:
        raise ValueError(f"grid has {total} cells, over the cap {max_nodes}")
    axes = [lo[i] + h * np.arange(n) for i, n in enumerate(shape)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    mask = np.asarray(body.contains(pts, 1e-12), bool).reshape(shape)
    if not mask.any():
        raise ValueError("no grid node lies inside the body")
    return GridGraph(float(h), float(delta), lo, mask, _stencil(h, delta, d), body)


# --------------------------------------------------------------------------- search


def _dilate(frontier: np.ndarray, K: np.ndarray) -> np.ndarray:
    if not frontier.any():
        return frontier
    return fftconvolve(frontier.astype(float), K, mode="same") > 0.5


def bfs_levels(g: GridGraph, source, stop=None, max_levels: int | None = None) -> np.ndarray:
    """Hop distances from ``source`` (a node index) to every node; -1 when unreached."""
    dist = np.full(g.shape, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.zeros(g.shape, bool)
    frontier[source] = True
    K = g.kernel()
    level = 0
    while frontier.any():
        if stop is not None and dist[stop] >= 0:
            break
        if max_levels is not None and level >= max_levels:
            break
        level += 1
        new = _dilate(frontier, K) & g.mask & (dist < 0)
        dist[new] = level
        frontier = new
    return dist


def bfs_distance(g: GridGraph, u, v) -> int | None:
    """BFS hop count between the nodes nearest u and v, or None when unreachable."""
    a, b = g.snap(u), g.snap(v)
    if a == b:
        return 0
    dist = bfs_levels(g, a, stop=b)
    return int(dist[b]) if dist[b] >= 0 else None


def witness_path(g: GridGraph, u, v) -> np.ndarray | None:
    """Grid path (node coordinates) realising the BFS distance, or None."""
    a, b = g.snap(u), g.snap(v)
    if a == b:
        return g.coords([a])
    dist = bfs_levels(g, a, stop=b)
    if dist[b] < 0:
        return None
    path = [np.array(b)]
    cur = np.array(b)
    while dist[tuple(cur)] > 0:
        nb = g.neighbors(cur)
        prev = nb[dist[tuple(nb.T)] == dist[tuple(cur)] - 1]
        cur = prev[np.lexsort(prev.T[::-1])[0]]
        path.append(cur)
    return g.coords(np.array(path[::-1]))


def reachable_set(g: GridGraph, u) -> np.ndarray:
    """Boolean mask of nodes reachable from the node nearest u."""
    return bfs_levels(g, g.snap(u)) >= 0


def grid_components(g: GridGraph, batch: int = 64) -> tuple[int, np.ndarray]:
    """Connected components: ``(count, labels)`` with label -1 outside the body."""
    ids = np.full(g.shape, -1, dtype=np.int64)
    n = g.n_nodes
    ids[g.mask] = np.arange(n)
    labels = np.arange(n)
    # each undirected edge once: offsets whose first nonzero entry is positive
    # offsets longer than the grid carry no edges (and would wrap in slicing)
    half = [o for o in g.offsets if tuple(o) > (0,) * g.dim and np.all(np.abs(o) < np.array(g.shape))]
    for start in range(0, len(half), batch):
        src, dst = [], []
        for o in half[start:start + batch]:
            a, b = _overlap(g.shape, o)
            both = g.mask[a] & g.mask[b]
            src.append(labels[ids[a][both]])
            dst.append(labels[ids[b][both]])
        src, dst = np.concatenate(src), np.concatenate(dst)
        keep = src != dst
        if not keep.any():
            continue
        pairs = np.unique(np.stack([src[keep], dst[keep]], axis=1), axis=0)
        adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
        _, comp = connected_components(adj, directed=False)
        labels = comp[labels]
    _, labels = np.unique(labels, return_inverse=True)
    out = np.full(g.shape, -1, dtype=np.int64)
    out[g.mask] = labels
    return int(labels.max()) + 1 if n else 0, out


# --------------------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    kind: str  # "step-length" or "outside"
    index: int
    value: float


def validate_path(body, path, tol: float = DEFAULT_TOL.geom_eps) -> tuple[bool, list]:
    """Check unit steps and body membership; returns ``(ok, violations)``."""
    pts = np.array([np.asarray(p, float) for p in getattr(path, "points", path)])
    out = []
    if len(pts) == 0:
        return False, [Violation("empty", 0, 0.0)]
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    for i, s in enumerate(steps):
        if abs(s - 1.0) > tol:
            out.append(Violation("step-length", i, float(s)))
    inside = np.asarray(body.contains(pts, tol), bool).reshape(-1)
    for i in np.flatnonzero(~inside):
        out.append(Violation("outside", int(i), float(np.linalg.norm(pts[i]))))
    return not out, out


# --------------------------------------------------------------------------- reports


@dataclass
class OracleReport:
    connected_components: int
    pair_distances: list = field(default_factory=list)
    witness_paths: list = field(default_factory=list)
    h: float = 0.0
    delta: float = 0.0
    n_nodes: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["kind", "u", "v", "value"])
        w.writerow(["grid", "", "", f"h={self.h};delta={self.delta};nodes={self.n_nodes}"])
        w.writerow(["components", "", "", self.connected_components])
        for u, v, dist in self.pair_distances:
            w.writerow(["distance", " ".join(map(repr, map(float, u))), " ".join(map(repr, map(float, v))),
                        "unreachable" if dist is None else dist])
        return buf.getvalue()


def oracle_report(body, h: float, delta: float | None = None, pairs=(), witnesses: bool = False,
                  allow_coarse: bool = False) -> OracleReport:
    g = build_grid_graph(body, h, delta, allow_coarse=allow_coarse)
    count, _ = grid_components(g)
    dists, paths = [], []
    for u, v in pairs:
        dists.append((np.asarray(u, float), np.asarray(v, float), bfs_distance(g, u, v)))
        if witnesses:
            paths.append(witness_path(g, u, v))
    return OracleReport(count, dists, paths, g.h, g.delta, g.n_nodes)
