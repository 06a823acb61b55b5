"""Compact axis-parallel boxes in R^n."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Box:
    """Closed box ``prod_i [lower[i], upper[i]]``.

    Degenerate boxes (``lower[i] == upper[i]`` on some axis) are allowed and
    have volume zero.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) == 0 or len(lo) != len(hi):
            raise ValueError(f"box endpoints must have equal nonzero length, got {lo!r}, {hi!r}")
        for a, b in zip(lo, hi):
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"box endpoints must be finite, got {lo!r}, {hi!r}")
            if a > b:
                raise ValueError(f"box has lower > upper: {lo!r}, {hi!r}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "Box":
        pairs = [tuple(p) for p in pairs]
        for p in pairs:
            if len(p) != 2:
                raise ValueError(f"each axis must be a [lo, hi] pair, got {list(p)!r}")
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def cube(cls, center: Sequence[float], radius: float) -> "Box":
        """Closed max-norm ball ``B[center, radius]``."""
        return cls(tuple(c - radius for c in center), tuple(c + radius for c in center))

    def to_pairs(self) -> list[list[float]]:
        return [[a, b] for a, b in zip(self.lower, self.upper)]

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    @property
    def volume(self) -> float:
        return math.prod(self.widths)

    @property
    def center(self) -> tuple[float, ...]:
        return tuple(0.5 * (a + b) for a, b in zip(self.lower, self.upper))

    def corners(self) -> list[tuple[float, ...]]:
        return list(itertools.product(*zip(self.lower, self.upper)))

    def contains(self, point: Sequence[float]) -> bool:
        if len(point) != self.dim:
            return False
        return all(a <= x <= b for a, x, b in zip(self.lower, point, self.upper))

    def contains_box(self, other: "Box") -> bool:
        return other.dim == self.dim and all(
            a <= c and d <= b
            for a, b, c, d in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def intersect(self, other: "Box") -> "Box | None":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        lo = tuple(max(a, c) for a, c in zip(self.lower, other.lower))
        hi = tuple(min(b, d) for b, d in zip(self.upper, other.upper))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def overlap_volume(self, other: "Box") -> float:
        inter = self.intersect(other)
        return 0.0 if inter is None else inter.volume

    def max_distance(self, point: Sequence[float]) -> float:
        """Largest max-norm distance from ``point`` to a point of the box."""
        return max(
            max(abs(x - a), abs(x - b))
            for a, x, b in zip(self.lower, point, self.upper)
        )

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.lower), np.array(self.upper)

    def __str__(self):
        return " x ".join(f"[{a:g}, {b:g}]" for a, b in zip(self.lower, self.upper))
