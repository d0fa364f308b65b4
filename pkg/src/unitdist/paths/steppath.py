from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["StepPath", "PathError", "join_at_center"]


class PathError(RuntimeError):
    """A construction produced (or would produce) an invalid unit-step path."""


@dataclass
class StepPath:
    """A walk through unit-distance steps.

    ``labels[i]`` names the construction that produced the step from ``points[i]``
    to ``points[i + 1]``.
    """

    points: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.points = [np.asarray(p, dtype=float) for p in self.points]
        if not self.points:
            raise ValueError("a path has at least one point")
        if len(self.labels) != len(self.points) - 1:
            raise ValueError("need one label per step")
        self.labels = list(self.labels)

    @classmethod
    def at(cls, p) -> "StepPath":
        return cls([p], [])

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def to(self, p, label: str) -> "StepPath":
        self.points.append(np.asarray(p, dtype=float))
        self.labels.append(label)
        return self

    def copy(self) -> "StepPath":
        return StepPath([p.copy() for p in self.points], list(self.labels))

    def reversed(self) -> "StepPath":
        return StepPath(self.points[::-1], self.labels[::-1])

    def extend(self, other: "StepPath", join_tol: float = 1e-9) -> "StepPath":
        if np.linalg.norm(other.start - self.end) > join_tol:
            raise PathError("paths do not share an endpoint")
        self.points.extend(other.points[1:])
        self.labels.extend(other.labels)
        return self

    def map(self, f) -> "StepPath":
        return StepPath([f(p) for p in self.points], self.labels)

    def step_lengths(self) -> np.ndarray:
        P = np.array(self.points)
        return np.linalg.norm(np.diff(P, axis=0), axis=1)

    def shortcut(self, tol: float = 1e-12) -> "StepPath":
        """Cut out loops that return to an already visited point (matched on a tol grid)."""
        digits = max(0, int(round(-np.log10(tol))))

        def key(p):
            return tuple(np.round(p, digits).tolist())

        pts, labels, seen = [self.points[0]], [], {key(self.points[0]): 0}
        for p, lab in zip(self.points[1:], self.labels):
            k = key(p)
            hit = seen.get(k)
            if hit is None:
                seen[k] = len(pts)
                pts.append(p)
                labels.append(lab)
            else:
                for q in pts[hit + 1:]:
                    seen.pop(key(q), None)
                del pts[hit + 1:]
                del labels[hit:]
        return StepPath(pts, labels)

    def to_json(self) -> dict:
        return {
            "points": [p.tolist() for p in self.points],
            "labels": list(self.labels),
            "steps": self.steps,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StepPath":
        return cls(obj["points"], obj.get("labels", ["step"] * (len(obj["points"]) - 1)))


def join_at_center(to_u: StepPath, to_v: StepPath) -> StepPath:
    """u -> v path from two paths that both start at the same hub point."""
    return to_u.reversed().extend(to_v).shortcut()
