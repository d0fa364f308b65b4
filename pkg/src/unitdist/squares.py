"""Component labels for the unit-distance graph of a small square ``C^2(l) = [0, l]^2``.

The case analysis is conjectural (not proved), so every output carries
``STATUS = "conjectured"``. The rules, with V the four corners:

* ``l >= sqrt 2``: connected, everything is ``big-union``;
* ``l > 2/sqrt 5``: points outside some open unit disk about a corner form one
  component (``big-union``); the rest are isolated;
* ``l = 2/sqrt 5``: three components. Points strictly outside the unit disk about
  (0,0) or about (l,l) (corners excluded) form ``diag-main``, the same for (0,l) and
  (l,0) gives ``diag-anti``, and the corners with all four corner circles form
  ``arc-frame``;
* ``1/sqrt 2 <= l < 2/sqrt 5``: as above but the frame splits into four pieces, one
  corner with its own circle each (``arc-corner-k``);
* ``l < 1/sqrt 2``: the diameter is below one and every point is isolated.

Points on a corner circle go to the arc component (closed-set tie-break).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_TOL

__all__ = [
    "STATUS",
    "REGIMES",
    "ComponentLabel",
    "CriticalLength",
    "corners",
    "regime_of",
    "classify_point",
    "classify_points",
    "critical_lengths",
    "emit_region_svg",
    "labels_csv",
]

STATUS = "conjectured"
INV_SQRT2 = 1 / math.sqrt(2)
TWO_OVER_SQRT5 = 2 / math.sqrt(5)
SQRT2 = math.sqrt(2)
REGIMES = ("below-1/√2", "between-1/√2-and-2/√5", "at-2/√5", "above-2/√5")


@dataclass(frozen=True)
class ComponentLabel:
    regime: str
    component_id: str

    @property
    def nontrivial(self) -> bool:
        return self.component_id != "isolated"


@dataclass(frozen=True)
class CriticalLength:
    value: float
    name: str
    transition: bool


def corners(l: float) -> np.ndarray:
    """Corners in the order used by ``arc-corner-k``: (0,0), (l,0), (l,l), (0,l)."""
    return np.array([[0.0, 0.0], [l, 0.0], [l, l], [0.0, l]])


def regime_of(l: float, eps: float = DEFAULT_TOL.geom_eps) -> str:
    if l <= 0:
        raise ValueError("side length must be positive")
    if abs(l - TWO_OVER_SQRT5) <= eps:
        return "at-2/√5"
    if l > TWO_OVER_SQRT5:
        return "above-2/√5"
    if l >= INV_SQRT2:
        return "between-1/√2-and-2/√5"
    return "below-1/√2"


def classify_points(l: float, P, eps: float = DEFAULT_TOL.geom_eps) -> list[ComponentLabel]:
    """Vectorised :func:`classify_point` over an (n, 2) array."""
    P = np.atleast_2d(np.asarray(P, float))
    if P.shape[1] != 2:
        raise ValueError("points must be 2D")
    if np.any((P < -eps) | (P > l + eps)):
        raise ValueError("point outside the square")
    regime = regime_of(l, eps)
    V = corners(l)
    D = np.linalg.norm(P[:, None, :] - V[None, :, :], axis=2)  # (n, 4)
    n = len(P)
    ids = np.full(n, "isolated", dtype=object)
    if regime == "above-2/√5":
        ids[np.any(D >= 1.0 - eps, axis=1)] = "big-union"
    elif regime in ("at-2/√5", "between-1/√2-and-2/√5"):
        on_circle = np.abs(D - 1.0) <= eps
        at_corner = D <= eps
        arc = on_circle | at_corner
        far = D > 1.0 + eps
        main = (far[:, 0] | far[:, 2]) & ~arc.any(axis=1)
        anti = (far[:, 1] | far[:, 3]) & ~arc.any(axis=1) & ~main
        ids[main] = "diag-main"
        ids[anti] = "diag-anti"
        has_arc = arc.any(axis=1)
        if regime == "at-2/√5":
            ids[has_arc] = "arc-frame"
        else:
            k = np.argmax(arc, axis=1) + 1
            for i in np.flatnonzero(has_arc):
                ids[i] = f"arc-corner-{k[i]}"
    return [ComponentLabel(regime, str(c)) for c in ids]


def classify_point(l: float, p, eps: float = DEFAULT_TOL.geom_eps) -> ComponentLabel:
    p = np.asarray(p, float)
    if p.shape != (2,):
        raise ValueError("point must be 2D")
    return classify_points(l, p[None, :], eps)[0]


def critical_lengths() -> list[CriticalLength]:
    """Side lengths where the component count changes, plus 8/sqrt(65) (no change here)."""
    return [
        CriticalLength(INV_SQRT2, "1/√2", True),
        CriticalLength(TWO_OVER_SQRT5, "2/√5", True),
        CriticalLength(8 / math.sqrt(65), "8/√65", False),
        CriticalLength(SQRT2, "√2", True),
    ]


def labels_csv(l: float, P) -> str:
    P = np.atleast_2d(np.asarray(P, float))
    labels = classify_points(l, P)
    buf = io.StringIO()
    buf.write(f"# status={STATUS}; l={l!r}\n")
    w = csv.writer(buf)
    w.writerow(["x", "y", "regime", "component_id"])
    for p, lab in zip(P, labels):
        w.writerow([repr(float(p[0])), repr(float(p[1])), lab.regime, lab.component_id])
    return buf.getvalue()


# --------------------------------------------------------------------------- SVG

_STYLE = """
.square { fill: none; stroke: #000; stroke-width: 2; }
.big-union { fill: #9ecae1; }
.diag-main { fill: #fdae6b; }
.diag-anti { fill: #a1d99b; }
.isolated { fill: #f7f7f7; }
.arc-frame { fill: none; stroke: #000; stroke-width: 6; }
.arc-corner { fill: none; stroke-width: 6; }
.arc-corner-1 { stroke: #d62728; } .arc-corner-2 { stroke: #9467bd; }
.arc-corner-3 { stroke: #8c564b; } .arc-corner-4 { stroke: #17becf; }
.node { stroke: #000; stroke-width: 2; }
"""


def emit_region_svg(l: float, size: int = 1000, margin: int = 50) -> str:
    """SVG picture of the nontrivial components of the square of side l (0 < l < sqrt 2)."""
    if not 0 < l < SQRT2:
        raise ValueError("need 0 < l < sqrt(2)")
    regime = regime_of(l)
    s = (size - 2 * margin) / l

    def X(x):
        return margin + s * x

    def Y(y):
        return margin + s * (l - y)

    V = corners(l)
    R = s  # unit radius in pixels
    sq = f'<rect x="{X(0):.3f}" y="{Y(l):.3f}" width="{s * l:.3f}" height="{s * l:.3f}"'
    disk = [f'<circle cx="{X(v[0]):.3f}" cy="{Y(v[1]):.3f}" r="{R:.3f}"' for v in V]
    defs = [f'<clipPath id="sq">{sq}/></clipPath>']
    body = []

    def lens(ids, name):
        # mask: white square, black on the intersection of the given open disks
        inner = f'{sq} fill="black"/>'
        for i in ids:
            defs.append(f'<clipPath id="{name}-c{i}">{disk[i]}/></clipPath>')
        for i in reversed(ids):
            inner = f'<g clip-path="url(#{name}-c{i})">{inner}</g>'
        defs.append(f'<mask id="{name}">{sq} fill="white"/>{inner}</mask>')
        return f'mask="url(#{name})"'

    body.append(f'{sq} class="isolated"/>')
    if regime == "above-2/√5":
        body.append(f'{sq} class="big-union" {lens([0, 1, 2, 3], "m-big")}/>')
    elif regime in ("at-2/√5", "between-1/√2-and-2/√5"):
        body.append(f'{sq} class="diag-main" {lens([0, 2], "m-main")}/>')
        body.append(f'{sq} class="diag-anti" {lens([1, 3], "m-anti")}/>')
    arcs = []
    if regime in ("at-2/√5", "between-1/√2-and-2/√5"):
        for k, d in enumerate(disk, start=1):
            cls = "arc-frame" if regime == "at-2/√5" else f"arc-corner arc-corner-{k}"
            arcs.append(f'{d} class="{cls}" clip-path="url(#sq)"/>')
        for k, v in enumerate(V, start=1):
            fill = "#000" if regime == "at-2/√5" else None
            cls = "node" + ("" if fill else f" arc-corner-{k}")
            style = f' fill="{fill}"' if fill else ' style="fill: currentColor"'
            arcs.append(f'<circle cx="{X(v[0]):.3f}" cy="{Y(v[1]):.3f}" r="9" class="{cls}"{style}/>')
    body.extend(arcs)
    body.append(f'{sq} class="square"/>')
    title = f"components of the unit-distance graph of C^2({l:.6g}), regime {regime}"
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">',
        f"<title>{title}</title>",
        f'<metadata>{{"status": "{STATUS}", "l": {l!r}, "regime": "{regime}"}}</metadata>',
        f"<style>{_STYLE}</style>",
        "<defs>" + "".join(defs) + "</defs>",
        *body,
        "</svg>",
        "",
    ])
