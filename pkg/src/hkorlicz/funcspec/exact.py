"""Closed-form metadata derived from expression trees.

Three kinds of exact information are recovered by walking the tree:

* distribution functions ``t -> |{x in box : |f(x)| > t}|``,
* integrals over a box (antiderivative differences),
* L^p norms.

Each function returns ``None`` when the tree is outside the recognised
families; callers then fall back to numerical estimation.
"""

from __future__ import annotations

import math

import numpy as np

from .box import Box
from .expr import (
    BinOp,
    Call,
    Const,
    FuncExpr,
    Linear,
    Neg,
    Node,
    OscDeriv,
    Power,
    Var,
    osc_antiderivative,
)

__all__ = [
    "step_cells",
    "StepDistribution",
    "PowerDistribution",
    "LinearDistribution",
    "ScaledDistribution",
    "exact_distribution",
    "exact_integral",
    "exact_lp",
]


def step_cells(node: Node, box: Box) -> tuple[np.ndarray, np.ndarray]:
    """Values and volumes of a step node on the common refinement of its breakpoints."""
    axes = []
    for axis, pts in enumerate(node.breakpoints(box.dim)):
        lo, hi = box.lower[axis], box.upper[axis]
        grid = sorted({lo, hi} | {p for p in pts if lo < p < hi})
        axes.append(np.array(grid))
    centers = [0.5 * (g[1:] + g[:-1]) for g in axes]
    widths = [np.diff(g) for g in axes]
    if any(len(c) == 0 for c in centers):
        return np.zeros(0), np.zeros(0)
    mesh = np.meshgrid(*centers, indexing="ij")
    X = np.stack([m.ravel() for m in mesh], axis=1)
    vol = np.ones(1)
    for w in widths:
        vol = np.multiply.outer(vol, w).ravel()
    vals = np.asarray(node.evaluate(X), dtype=float)
    keep = vol > 0
    return vals[keep], vol[keep]


class StepDistribution:
    """Distribution function of a function taking finitely many values."""

    mode = "exact"

    def __init__(self, values, volumes):
        a = np.abs(np.asarray(values, dtype=float))
        w = np.asarray(volumes, dtype=float)
        order = np.argsort(a, kind="stable")
        self._a = a[order]
        self._w = w[order]
        # tail[i] = total volume of entries with index >= i
        self._tail = np.concatenate([np.cumsum(self._w[::-1])[::-1], [0.0]])

    @property
    def total(self) -> float:
        return float(self._tail[0])

    @property
    def ess_sup(self) -> float:
        nz = self._a[self._w > 0]
        return float(nz[-1]) if len(nz) else 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._a, t, side="right")
        return self._tail[idx]

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Jump points ``v > 0`` and the measure of ``{|f| >= v}`` (left limits)."""
        uniq, first = np.unique(self._a, return_index=True)
        mass = self._tail[first]
        keep = uniq > 0
        return uniq[keep], mass[keep]

    def kinks(self) -> np.ndarray:
        return np.zeros(0)


class PowerDistribution:
    """``|x|^p`` (max norm) on a box, ``p > 0``."""

    mode = "exact"

    def __init__(self, p: float, box: Box):
        self.p = p
        self.box = box
        self.total = box.volume

    @property
    def ess_sup(self) -> float:
        r = max(max(abs(a), abs(b)) for a, b in zip(self.box.lower, self.box.upper))
        return r ** self.p

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = np.where(t > 0, np.maximum(t, 0) ** (1.0 / self.p), 0.0)
        inner = np.ones_like(s)
        for a, b in zip(self.box.lower, self.box.upper):
            inner = inner * np.clip(np.minimum(b, s) - np.maximum(a, -s), 0.0, None)
        out = self.total - inner
        return np.where(t < 0, self.total, np.clip(out, 0.0, self.total))

    def atoms(self):
        return np.zeros(0), np.zeros(0)

    def kinks(self) -> np.ndarray:
        ends = {abs(v) for v in self.box.lower + self.box.upper}
        inner = max(max(0.0, a, -b) for a, b in zip(self.box.lower, self.box.upper))
        ends.add(inner)
        return np.array(sorted(e ** self.p for e in ends if e > 0))


class LinearDistribution:
    """``c x + b`` on a 1-D interval, ``c != 0``."""

    mode = "exact"

    def __init__(self, c: float, b: float, box: Box):
        self.c, self.b = c, b
        self.lo, self.hi = box.lower[0], box.upper[0]
        self.total = self.hi - self.lo

    @property
    def ess_sup(self) -> float:
        return max(abs(self.c * self.lo + self.b), abs(self.c * self.hi + self.b))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tp = np.maximum(t, 0.0)
        x1 = (-tp - self.b) / self.c
        x2 = (tp - self.b) / self.c
        left, right = np.minimum(x1, x2), np.maximum(x1, x2)
        inside = np.clip(np.minimum(right, self.hi) - np.maximum(left, self.lo), 0.0, None)
        out = np.clip(self.total - inside, 0.0, self.total)
        return np.where(t < 0, self.total, out)

    def atoms(self):
        return np.zeros(0), np.zeros(0)

    def kinks(self) -> np.ndarray:
        return np.array(sorted({abs(self.c * self.lo + self.b), abs(self.c * self.hi + self.b)} - {0.0}))


class ScaledDistribution:
    """Distribution of ``k * g`` given that of ``g`` (``k > 0``)."""

    mode = "exact"

    def __init__(self, base, k: float):
        self.base, self.k = base, k
        self.total = base.total

    @property
    def ess_sup(self) -> float:
        return self.k * self.base.ess_sup

    def __call__(self, t):
        return self.base(np.asarray(t, dtype=float) / self.k)

    def atoms(self):
        v, w = self.base.atoms()
        return v * self.k, w

    def kinks(self):
        return self.base.kinks() * self.k


def _const_factor(node: BinOp) -> tuple[float, Node] | None:
    if node.op == "*":
        if isinstance(node.left, Const):
            return float(node.left.value), node.right
        if isinstance(node.right, Const):
            return float(node.right.value), node.left
    if node.op == "/" and isinstance(node.right, Const) and node.right.value != 0:
        return 1.0 / float(node.right.value), node.left
    return None


def _linear_1d(node: Node) -> tuple[float, float] | None:
    if isinstance(node, Var):
        return 1.0, 0.0
    if isinstance(node, Linear):
        return node.coeffs[0], node.offset
    return None


def _dist(node: Node, box: Box):
    if node.is_step:
        vals, vols = step_cells(node, box)
        return StepDistribution(vals, vols)
    if isinstance(node, Neg):
        return _dist(node.arg, box)
    if isinstance(node, Call) and node.name == "abs":
        return _dist(node.args[0], box)
    if isinstance(node, BinOp):
        split = _const_factor(node)
        if split is None:
            return None
        k, inner = split
        if k == 0:
            return StepDistribution([0.0], [box.volume])
        base = _dist(inner, box)
        return None if base is None else ScaledDistribution(base, abs(k))
    if isinstance(node, Power) and node.p > 0:
        return PowerDistribution(node.p, box)
    if box.dim == 1:
        lin = _linear_1d(node)
        if lin is not None:
            c, b = lin
            if c == 0:
                return StepDistribution([b], [box.volume])
            return LinearDistribution(c, b, box)
    return None


def exact_distribution(f: FuncExpr, box: Box | None = None):
    """Exact distribution function of ``f`` on ``box``, or ``None``."""
    return _dist(f.body, box or f.domain)


def _power_integral(q: float, a: float, b: float) -> float:
    """Integral of ``|x|^q`` over ``[a, b]``, ``q > -1``."""

    def G(x):
        return math.copysign(abs(x) ** (q + 1) / (q + 1), x)

    return G(b) - G(a)


def _integral(node: Node, box: Box) -> float | None:
    if box.volume == 0:
        return 0.0
    if node.is_step:
        vals, vols = step_cells(node, box)
        return math.fsum(vals * vols)
    if isinstance(node, Neg):
        v = _integral(node.arg, box)
        return None if v is None else -v
    if isinstance(node, BinOp):
        if node.op in "+-":
            a, b = _integral(node.left, box), _integral(node.right, box)
            if a is None or b is None:
                return None
            return a + b if node.op == "+" else a - b
        split = _const_factor(node)
        if split is not None:
            v = _integral(split[1], box)
            return None if v is None else split[0] * v
        return None
    if isinstance(node, Var):
        return box.volume * box.center[node.index]
    if isinstance(node, Linear):
        return box.volume * (sum(c * m for c, m in zip(node.coeffs, box.center)) + node.offset)
    if box.dim == 1:
        a, b = box.lower[0], box.upper[0]
        if isinstance(node, Power) and node.p > -1:
            return _power_integral(node.p, a, b)
        if isinstance(node, OscDeriv):
            return osc_antiderivative(b) - osc_antiderivative(a)
    return None


def exact_integral(f: FuncExpr, box: Box | None = None) -> float | None:
    """Exact integral of ``f`` over ``box`` (antiderivative metadata), or ``None``."""
    return _integral(f.body, box or f.domain)


def _lp_power(node: Node, box: Box, p: float) -> float | None:
    """``integral |f|^p`` over the box."""
    if node.is_step:
        vals, vols = step_cells(node, box)
        return math.fsum(np.abs(vals) ** p * vols)
    if isinstance(node, Neg):
        return _lp_power(node.arg, box, p)
    if isinstance(node, Call) and node.name == "abs":
        return _lp_power(node.args[0], box, p)
    if isinstance(node, BinOp):
        split = _const_factor(node)
        if split is None:
            return None
        v = _lp_power(split[1], box, p)
        return None if v is None else abs(split[0]) ** p * v
    if box.dim != 1:
        return None
    a, b = box.lower[0], box.upper[0]
    if isinstance(node, Power) and node.p * p > -1:
        return _power_integral(node.p * p, a, b)
    lin = _linear_1d(node)
    if lin is not None:
        c, off = lin
        if c == 0:
            return abs(off) ** p * (b - a)
        u1, u2 = c * a + off, c * b + off
        return _power_integral(p, u1, u2) / c
    return None


def exact_lp(f: FuncExpr, p: float, box: Box | None = None) -> float | None:
    """Exact ``(integral |f|^p)^(1/p)`` over ``box``, or ``None``."""
    if p <= 0:
        raise ValueError("p must be positive")
    v = _lp_power(f.body, box or f.domain, p)
    return None if v is None else v ** (1.0 / p)
