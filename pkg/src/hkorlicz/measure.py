"""Distribution functions ``t -> |{x in box : |f(x)| > t}|`` and ball volumes."""

from __future__ import annotations

import functools
import math
from typing import Sequence

import numpy as np

from .funcspec import Box, FuncExpr, exact_distribution
from .hkint import ConvergenceError

__all__ = [
    "ball_volume",
    "DistributionFn",
    "EstimatedDistribution",
    "distribution",
    "dist",
    "MAX_LEVEL",
]

# per-axis refinement budget of the estimator: 2^k midpoints per axis
MAX_LEVEL = {1: 16, 2: 10}
START_LEVEL = {1: 4, 2: 3}
AGREEMENT = 1e-3


def ball_volume(a: Sequence[float], r: float, n: int | None = None) -> float:
    """Volume of the closed max-norm ball ``B(a, r)``: a cube of side ``2r``."""
    if not r > 0:
        raise ValueError("radius must be positive")
    n = len(a) if n is None else n
    return (2.0 * r) ** n


def _max_level(n: int) -> int:
    return MAX_LEVEL.get(n, max(1, 21 // n))


class EstimatedDistribution:
    """Midpoint-grid estimate of a distribution function.

    Built from the ``2^level``-per-axis midpoint grid at the first level whose
    survival function agrees with the next finer one within ``10^-3 * volume``
    (sup over ``t``).  The finer level is kept.
    """

    mode = "estimated"

    def __init__(self, f: FuncExpr, box: Box):
        self.box = box
        self.total = box.volume
        n = box.dim
        start, top = min(START_LEVEL.get(n, 1), _max_level(n)), _max_level(n)
        prev = self._sample(f, box, start)
        level = start
        while True:
            if level + 1 > top:
                raise ConvergenceError(
                    f"distribution estimate did not settle at 2^{top} points per axis", (level,)
                )
            cur = self._sample(f, box, level + 1)
            gap = self._sup_gap(prev, cur)
            level += 1
            if gap <= AGREEMENT * max(self.total, 1e-300):
                break
            prev = cur
        self.level = level
        self.gap = gap
        self._a, self._w = cur

    @staticmethod
    def _sample(f: FuncExpr, box: Box, level: int):
        m = 2**level
        axes = [lo + (np.arange(m) + 0.5) * ((hi - lo) / m) for lo, hi in zip(box.lower, box.upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        X = np.stack([g.ravel() for g in mesh], axis=1)
        hit = np.zeros(len(X), dtype=bool)
        for s in f.singular:
            hit |= np.all(X == np.asarray(s), axis=1)
        vals = np.zeros(len(X))
        if (~hit).any():
            vals[~hit] = f.values(X[~hit])
        a = np.sort(np.abs(vals))
        return a, box.volume / len(a)

    @staticmethod
    def _survival(sample, t):
        a, w = sample
        return (len(a) - np.searchsorted(a, t, side="right")) * w

    def _sup_gap(self, s1, s2) -> float:
        # both estimates are right-continuous steps; compare at every jump and just below
        ts = np.union1d(s1[0], s2[0])
        ts = np.concatenate([ts, np.nextafter(ts, -np.inf)])
        return float(np.max(np.abs(self._survival(s1, ts) - self._survival(s2, ts))))

    @property
    def ess_sup(self) -> float:
        return float(self._a[-1]) if len(self._a) else 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 0, self.total, self._survival((self._a, self._w), t))

    def atoms(self):
        return np.zeros(0), np.zeros(0)

    def kinks(self):
        return np.zeros(0)


class DistributionFn:
    """Distribution function of ``f`` on ``box``.

    ``mode`` is ``"exact"`` when the expression tree has closed-form
    metadata, ``"estimated"`` otherwise.
    """

    def __init__(self, f: FuncExpr, box: Box, impl):
        self.source = f
        self.box = box
        self._impl = impl
        self.mode = impl.mode
        self.total = impl.total

    @property
    def ess_sup(self) -> float:
        return float(self._impl.ess_sup)

    @property
    def level(self) -> int | None:
        return getattr(self._impl, "level", None)

    def __call__(self, t):
        return np.clip(self._impl(t), 0.0, self.total)

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Jump values ``v > 0`` with ``|{|f| >= v}|``; empty in estimated mode."""
        return self._impl.atoms()

    def kinks(self) -> np.ndarray:
        return np.asarray(self._impl.kinks(), dtype=float)

    def __repr__(self):
        return f"DistributionFn(mode={self.mode!r}, box={self.box}, total={self.total:g})"


@functools.lru_cache(maxsize=512)
def _distribution(f: FuncExpr, box: Box) -> DistributionFn:
    impl = exact_distribution(f, box)
    if impl is None:
        impl = EstimatedDistribution(f, box)
    return DistributionFn(f, box, impl)


def distribution(f: FuncExpr, box: Box | None = None) -> DistributionFn:
    box = box or f.domain
    if box.dim != f.dim:
        raise ValueError(f"box dimension {box.dim} does not match function dimension {f.dim}")
    return _distribution(f, box)


def dist(f: FuncExpr, box: Box | None, t: float) -> float:
    """``|{x in box : |f(x)| > t}|`` (exact metadata when available)."""
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    return float(distribution(f, box)(t))
