"""Gauge (Henstock-Kurzweil) integration over compact boxes.

Partitions are lists of closed boxes with tags; a partition is fine for a
gauge ``delta`` when every cell lies in the closed max-norm ball of radius
``delta(tag)`` about its tag.

``hk_integrate`` builds such partitions adaptively.  Regular cells are tagged
at their centres and refined where the one-level and two-level dyadic Riemann
sums disagree.  Cells containing a declared singular point are tagged at that
point with summand value 0, and shrink radially until the integral over the
ring released at the last shrink is below tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .funcspec import Box, DomainError, FuncExpr, SingularPointError

__all__ = [
    "ConvergenceError",
    "Gauge",
    "TaggedPartition",
    "IntegralResult",
    "constant_gauge",
    "radial_gauge",
    "tabulated_gauge",
    "is_delta_fine",
    "cousin_partition",
    "riemann_sum",
    "hk_integrate",
    "alexiewicz_norm",
]

DEFAULT_MAX_CELLS = 2**22
DEFAULT_MAX_DEPTH = 60


class ConvergenceError(RuntimeError):
    """Adaptive procedure exhausted its budget; ``last`` holds the final estimates."""

    def __init__(self, message: str, last: Sequence[float] = ()):
        super().__init__(message)
        self.last = tuple(last)


# gauges ------------------------------------------------------------------


@dataclass(frozen=True)
class Gauge:
    """Strictly positive function on a box.

    ``kind`` is ``"constant"`` (``params = (delta0,)``), ``"radial"``
    (``params = (point, scale, floor)``, ``delta(x) = max(scale*|x-point|, floor)``)
    or ``"tabulated"`` (``params = (box, level, values)``: one positive value
    per cell of the ``2^level``-per-axis dyadic grid of ``box``).
    """

    kind: str
    params: tuple

    def __call__(self, x: Sequence[float]) -> float:
        x = tuple(float(v) for v in x)
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "radial":
            point, scale, floor = self.params
            d = max(abs(a - b) for a, b in zip(x, point))
            return max(scale * d, floor)
        box, level, values = self.params
        n = 2**level
        idx = []
        for a, lo, hi in zip(x, box.lower, box.upper):
            k = int((a - lo) / (hi - lo) * n) if hi > lo else 0
            idx.append(min(max(k, 0), n - 1))
        return float(values[np.ravel_multi_index(tuple(idx), (n,) * box.dim)])


def constant_gauge(delta0: float) -> Gauge:
    if not delta0 > 0:
        raise ValueError("gauge must be strictly positive")
    return Gauge("constant", (float(delta0),))


def radial_gauge(point: Sequence[float], scale: float, floor: float) -> Gauge:
    if not (scale >= 0 and floor > 0):
        raise ValueError("radial gauge needs scale >= 0 and floor > 0")
    return Gauge("radial", (tuple(float(v) for v in point), float(scale), float(floor)))


def tabulated_gauge(box: Box, level: int, values: Sequence[float]) -> Gauge:
    values = tuple(float(v) for v in np.ravel(values))
    if len(values) != 2 ** (level * box.dim):
        raise ValueError(f"need {2 ** (level * box.dim)} gauge values, got {len(values)}")
    if not all(v > 0 for v in values):
        raise ValueError("gauge must be strictly positive at every node")
    return Gauge("tabulated", (box, int(level), values))


# partitions --------------------------------------------------------------


@dataclass(frozen=True)
class TaggedPartition:
    cells: tuple[tuple[Box, tuple[float, ...]], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "cells", tuple((b, tuple(float(v) for v in t)) for b, t in self.cells)
        )

    def __len__(self):
        return len(self.cells)

    def validate(self, box: Box | None = None) -> None:
        """Raise ``ValueError`` unless tags lie in their cells, cells do not
        overlap and (when ``box`` is given) they cover ``box``."""
        for b, t in self.cells:
            if not b.contains(t):
                raise ValueError(f"tag {t} is not in its cell {b}")
        boxes = [b for b, _ in self.cells]
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                inter = boxes[i].intersect(boxes[j])
                if inter is not None and inter.volume > 0:
                    raise ValueError(f"cells {boxes[i]} and {boxes[j]} overlap")
        if box is not None:
            total = math.fsum(b.volume for b in boxes)
            if any(not box.contains_box(b) for b in boxes):
                raise ValueError("cell outside the parent box")
            if abs(total - box.volume) > 1e-12 * max(box.volume, 1e-300):
                raise ValueError(f"cells cover volume {total}, box has {box.volume}")


def is_delta_fine(P: TaggedPartition, delta: Gauge) -> bool:
    """Every cell lies in the closed max-norm ball of radius ``delta(tag)``."""
    return all(b.max_distance(t) <= delta(t) for b, t in P.cells)


def _split_longest(b: Box) -> tuple[Box, Box]:
    axis = int(np.argmax(b.widths))
    mid = 0.5 * (b.lower[axis] + b.upper[axis])
    up = list(b.upper)
    up[axis] = mid
    lo = list(b.lower)
    lo[axis] = mid
    return Box(b.lower, tuple(up)), Box(tuple(lo), b.upper)


def cousin_partition(box: Box, delta: Gauge, *, max_depth: int = DEFAULT_MAX_DEPTH, max_cells: int = DEFAULT_MAX_CELLS) -> TaggedPartition:
    """A ``delta``-fine tagged partition of ``box`` by recursive bisection.

    A cell is accepted as soon as one of its corners or its centre works as a
    tag (a cell holding a radial gauge's own point must be tagged there);
    otherwise it is halved along its longest axis.  The depth budget is
    per axis.
    """
    cells = []
    stack = [(box, 0)]
    while stack:
        b, depth = stack.pop()
        candidates = b.corners() + [b.center]
        if delta.kind == "radial" and b.contains(delta.params[0]):
            # a cell holding the gauge's own point is tagged there or split
            candidates = [tuple(delta.params[0])]
        for tag in candidates:
            if b.max_distance(tag) <= delta(tag):
                cells.append((b, tag))
                break
        else:
            if depth >= max_depth * box.dim:
                raise ConvergenceError(f"cousin_partition: depth budget exceeded near {b}")
            if len(cells) + len(stack) > max_cells:
                raise ConvergenceError("cousin_partition: cell budget exceeded")
            left, right = _split_longest(b)
            stack.append((right, depth + 1))
            stack.append((left, depth + 1))
    cells.sort(key=lambda c: c[0].lower)
    return TaggedPartition(tuple(cells))


def riemann_sum(f: FuncExpr, P: TaggedPartition) -> float:
    """``sum f(tag) * volume(cell)``, summed exactly (``math.fsum``)."""
    if not P.cells:
        return 0.0
    tags = np.array([t for _, t in P.cells])
    for t in map(tuple, tags):
        if t in f.singular:
            raise SingularPointError(f"tag at singular point {t}")
    vals = f.values(tags)
    vols = np.array([b.volume for b, _ in P.cells])
    return math.fsum(vals * vols)


# adaptive integration ----------------------------------------------------


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    cells: int
    diagnostics: dict = field(default_factory=dict, compare=False)


def _children(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All ``2^n`` dyadic children; output shape ``(N * 2^n, n)``, parent-major."""
    N, n = lo.shape
    mid = 0.5 * (lo + hi)
    bits = np.array(np.meshgrid(*[[0, 1]] * n, indexing="ij")).reshape(n, -1).T  # (2^n, n)
    clo = np.where(bits[None, :, :] == 0, lo[:, None, :], mid[:, None, :])
    chi = np.where(bits[None, :, :] == 0, mid[:, None, :], hi[:, None, :])
    return clo.reshape(-1, n), chi.reshape(-1, n)


_TERNARY = np.array([1 / 6, 1 / 2, 5 / 6])


def _ternary_points(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Midpoints of the ``3^n`` equal subcells of every cell, cell-major."""
    N, n = lo.shape
    frac = np.array(np.meshgrid(*[_TERNARY] * n, indexing="ij")).reshape(n, -1).T
    pts = lo[:, None, :] + frac[None, :, :] * (hi - lo)[:, None, :]
    return pts.reshape(-1, n)


class _Budget:
    def __init__(self, max_cells: int, max_depth: int):
        self.max_cells = max_cells
        self.max_depth = max_depth
        self.used = 0


def _refine(f: FuncExpr, lo, hi, density: float, budget: _Budget):
    """Adaptive midpoint refinement of regular cells.

    A cell is accepted when its centre sum, its children sum and its
    grandchildren sum agree pairwise (consecutive levels) within
    ``density * volume``; the grandchildren sum is kept.  A ternary midpoint
    sum must agree as well: dyadic samples alone alias on chirps whose local
    period divides the sample spacing.  Returns ``(origins, contributions,
    error)``.
    """
    n = lo.shape[1]
    k = 2**n
    out_lo, out_val = [], []
    err = 0.0
    if len(lo) == 0:
        return np.zeros((0, n)), np.zeros(0), 0.0
    fc = f.values(0.5 * (lo + hi))
    clo, chi = _children(lo, hi)
    fch = f.values(0.5 * (clo + chi)).reshape(-1, k)
    depth = 0
    while len(lo):
        glo, ghi = _children(clo, chi)
        fg = f.values(0.5 * (glo + ghi)).reshape(-1, k * k)
        vol = np.prod(hi - lo, axis=1)
        s1 = fc * vol
        s2 = fch.sum(axis=1) * (vol / k)
        s4 = fg.sum(axis=1) * (vol / (k * k))
        s3 = f.values(_ternary_points(lo, hi)).reshape(len(lo), -1).mean(axis=1) * vol
        d12 = np.abs(s1 - s2)
        d24 = np.abs(s2 - s4)
        thr = density * vol
        ok = (d12 <= thr) & (d24 <= thr) & (np.abs(s3 - s4) <= thr)
        budget.used += int(ok.sum()) * k * k
        out_lo.append(lo[ok])
        out_val.append(s4[ok])
        err += math.fsum(d24[ok])
        bad = ~ok
        if not bad.any():
            break
        depth += 1
        pending = budget.used + int(bad.sum()) * k * k
        if depth > budget.max_depth or pending > budget.max_cells:
            partial = math.fsum(np.concatenate(out_val)) if out_val else 0.0
            last = (partial + math.fsum(s2[bad]), partial + math.fsum(s4[bad]))
            raise ConvergenceError(
                f"hk_integrate: {'depth' if depth > budget.max_depth else 'cell'} budget exceeded "
                f"with {int(bad.sum())} unresolved cells; last two sums {last[0]:.9g}, {last[1]:.9g}",
                last,
            )
        sel = np.repeat(bad, k)
        lo, hi = clo[sel], chi[sel]
        fc = fch[bad].ravel()
        clo, chi = glo[np.repeat(sel, k)], ghi[np.repeat(sel, k)]
        fch = fg[bad].reshape(-1, k)
    return np.concatenate(out_lo), np.concatenate(out_val), err


def _default_seed(n: int) -> int:
    return {1: 6, 2: 3}.get(n, 2)


def _subdivide(lo, hi, level: int):
    """Split every cell into ``2^level`` equal parts per axis."""
    for _ in range(level):
        lo, hi = _children(lo, hi)
    return lo, hi


def _axis_grids(f: FuncExpr, box: Box, seed_level: int, extra: Sequence[Sequence[float]] = ()):
    n = box.dim
    grids = []
    bps = f.breakpoints()
    for axis in range(n):
        lo, hi = box.lower[axis], box.upper[axis]
        pts = set(np.linspace(lo, hi, 2**seed_level + 1).tolist())
        pts |= {p for p in bps[axis] if lo < p < hi}
        if extra:
            pts |= {p for p in extra[axis] if lo < p < hi}
        grids.append(np.array(sorted(pts)))
    return grids


def _seed_cells(grids):
    los = np.meshgrid(*[g[:-1] for g in grids], indexing="ij")
    his = np.meshgrid(*[g[1:] for g in grids], indexing="ij")
    lo = np.stack([m.ravel() for m in los], axis=1)
    hi = np.stack([m.ravel() for m in his], axis=1)
    return lo, hi


def _contains_any(lo, hi, points) -> np.ndarray:
    mask = np.zeros(len(lo), dtype=bool)
    for s in points:
        s = np.asarray(s)
        mask |= np.all((lo <= s) & (s <= hi), axis=1)
    return mask


def _integrate_leaves(
    f: FuncExpr,
    box: Box,
    tol: float,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    seed_level: int | None = None,
    extra_breaks: Sequence[Sequence[float]] = (),
):
    """Core of ``hk_integrate``; returns leaf origins and contributions too."""
    if box.dim != f.dim:
        raise DomainError(f"box dimension {box.dim} does not match function dimension {f.dim}")
    if not f.domain.contains_box(box):
        raise DomainError(f"{box} is not inside the domain {f.domain}")
    n = box.dim
    empty = np.zeros((0, n)), np.zeros(0)
    if box.volume == 0:
        return (*empty, 0.0, 0, {"tail_levels": 0})
    budget = _Budget(max_cells, max_depth)
    density = 0.5 * tol / box.volume
    if seed_level is None:
        seed_level = _default_seed(n)
    lo, hi = _seed_cells(_axis_grids(f, box, seed_level, extra_breaks))
    sing = [s for s in f.singular if box.contains(s)]
    core = _contains_any(lo, hi, sing) if sing else np.zeros(len(lo), dtype=bool)
    origins, vals, err = _refine(f, lo[~core], hi[~core], density, budget)
    leaves_lo, leaves_val = [origins], [vals]
    tail_levels = 0
    tail_err = 0.0
    deltas: list[float] = []
    core_lo, core_hi = lo[core], hi[core]
    while len(core_lo):
        # release the part of each singular cell away from its singular point
        tail_levels += 1
        if tail_levels > max_depth:
            raise ConvergenceError(
                f"hk_integrate: singular tail did not settle after {max_depth} shrinks; last ring integrals {deltas[-2:]}",
                tuple(deltas[-2:]),
            )
        clo, chi = _children(core_lo, core_hi)
        keep = _contains_any(clo, chi, sing)
        # fresh rings get the seed resolution, so coarse cells are never
        # accepted on a chance agreement of the two sums
        ring_lo, ring_hi = _subdivide(clo[~keep], chi[~keep], seed_level)
        ring_vol = float(np.prod(ring_hi - ring_lo, axis=1).sum())
        # each ring gets an absolute budget of tol/4
        ring_density = 0.25 * tol / ring_vol if ring_vol > 0 else density
        o, v, e = _refine(f, ring_lo, ring_hi, max(density, ring_density), budget)
        delta = math.fsum(v)
        leaves_lo.append(o)
        leaves_val.append(v)
        err += e
        deltas.append(delta)
        core_lo, core_hi = clo[keep], chi[keep]
        if abs(delta) <= 0.25 * tol:
            tail_err = abs(delta)
            break
    # cells still containing a singular point carry the pinned tag, value 0
    budget.used += len(core_lo)
    origins = np.concatenate(leaves_lo)
    vals = np.concatenate(leaves_val)
    diag = {"tail_levels": tail_levels, "ring_integrals": deltas, "core_cells": len(core_lo)}
    return origins, vals, err + tail_err, budget.used, diag


def _ordered_sum(origins: np.ndarray, vals: np.ndarray) -> float:
    if len(vals) == 0:
        return 0.0
    order = np.lexsort(origins.T[::-1])
    return math.fsum(vals[order])


def hk_integrate(
    f: FuncExpr,
    box: Box | None = None,
    tol: float = 1e-4,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    seed_level: int | None = None,
) -> IntegralResult:
    """Gauge integral of ``f`` over ``box`` to absolute tolerance ``tol``.

    The result is a Riemann sum over a tagged partition built adaptively, with
    ``error`` the sum of the per-cell one-level/two-level disagreements plus
    the last singular-ring integral.  Raises :class:`ConvergenceError` when the
    cell or depth budget runs out.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    box = box or f.domain
    origins, vals, err, used, diag = _integrate_leaves(
        f, box, tol, max_cells=max_cells, max_depth=max_depth, seed_level=seed_level
    )
    return IntegralResult(_ordered_sum(origins, vals), err, used, diag)


def alexiewicz_norm(
    f: FuncExpr,
    box: Box | None = None,
    tol: float = 1e-4,
    *,
    start: int = 16,
    max_points: int = 4096,
) -> float:
    """``sup_t |integral_{lo}^{t} f|`` over a refining grid of ``t`` (1-D only)."""
    box = box or f.domain
    if box.dim != 1:
        raise ValueError("the Alexiewicz norm is defined for one-dimensional functions")
    lo, hi = box.lower[0], box.upper[0]
    if hi == lo:
        return 0.0
    prev = None
    N = start
    while True:
        ts = np.linspace(lo, hi, N + 1)
        origins, vals, _, _, _ = _integrate_leaves(f, box, tol, extra_breaks=[ts[1:-1]])
        order = np.argsort(origins[:, 0], kind="stable")
        x0 = origins[order, 0]
        partial = np.cumsum(vals[order])
        # partial integral up to ts[j] = sum of leaves with origin < ts[j]
        idx = np.searchsorted(x0, ts[1:], side="left")
        sums = np.where(idx > 0, partial[np.maximum(idx - 1, 0)], 0.0)
        current = float(np.max(np.abs(sums)))
        if prev is not None and abs(current - prev) <= tol:
            return current
        if 2 * N > max_points:
            raise ConvergenceError(f"alexiewicz_norm: sup still moving at {N} grid points", (prev or 0.0, current))
        prev = current
        N *= 2
