"""Strong (Luxemburg) and weak Orlicz norms.

Both norms are ``inf{alpha > 0 : modular(f / alpha) <= 1}`` for a modular that
is nonincreasing in ``alpha``, so they are computed by bracketing and
bisection on the feasibility map.  The returned value is the upper end of the
final bracket, a point where feasibility was actually observed.

* strong modular: ``HK-integral over K of theta(|f| / alpha)``
* weak modular:   ``sup_{t > 0} theta(t) * |{|f| / alpha > t}|``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .funcspec import Box, EvaluationError, FuncExpr
from .hkint import _axis_grids, _default_seed, _seed_cells, hk_integrate
from .measure import distribution
from .young import YoungFn

__all__ = [
    "NormResult",
    "strong_modular",
    "weak_modular",
    "luxemburg_norm",
    "weak_norm",
    "bisect_norm",
    "ALPHA_FLOOR",
    "ALPHA_CEIL",
]

ALPHA_FLOOR = 1e-9
ALPHA_CEIL = 1e9
DEFAULT_INT_TOL = 1e-4
DEFAULT_NORM_TOL = 1e-5

T_GRID_POINTS = 512
T_GRID_SPAN = 1e-6
LEFT_APPROACH = 1e-9


@dataclass(frozen=True)
class NormResult:
    value: float
    bracket: tuple[float, float]
    modular_at_value: float
    iterations: int
    tolerances: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def __float__(self):
        return float(self.value)


def bisect_norm(modular: Callable[[float], float], tol: float = DEFAULT_NORM_TOL, tolerances: dict | None = None) -> NormResult:
    """``inf{alpha : modular(alpha) <= 1}`` for a nonincreasing ``modular``.

    Expands or shrinks geometrically (factor 2) from ``alpha = 1`` to a
    bracket, then bisects until ``hi - lo <= tol * hi``.  Returns 0 when
    ``alpha`` stays feasible down to ``ALPHA_FLOOR`` and ``+inf`` when it is
    infeasible up to ``ALPHA_CEIL``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    tolerances = dict(tolerances or {}, norm_tol=tol)
    calls = 0

    def value(a):
        nonlocal calls
        calls += 1
        return modular(a)

    alpha = 1.0
    m = value(alpha)
    if m <= 1:
        hi, m_hi = alpha, m
        while True:
            alpha = hi / 2
            if alpha < ALPHA_FLOOR:
                return NormResult(0.0, (0.0, hi), m_hi, calls, tolerances)
            m = value(alpha)
            if m > 1:
                lo = alpha
                break
            hi, m_hi = alpha, m
    else:
        lo = alpha
        while True:
            alpha = lo * 2
            if alpha > ALPHA_CEIL:
                return NormResult(math.inf, (lo, math.inf), m, calls, tolerances)
            m = value(alpha)
            if m <= 1:
                hi, m_hi = alpha, m
                break
            lo = alpha
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        m = value(mid)
        if m <= 1:
            hi, m_hi = mid, m
        else:
            lo = mid
    return NormResult(hi, (lo, hi), m_hi, calls, tolerances)


# strong ------------------------------------------------------------------


def _coarse_magnitude(g: FuncExpr, K: Box) -> float:
    lo, hi = _seed_cells(_axis_grids(g, K, _default_seed(K.dim)))
    vals = g.values(0.5 * (lo + hi))
    return float(np.sum(np.abs(vals) * np.prod(hi - lo, axis=1)))


def strong_modular(f: FuncExpr, theta: YoungFn, alpha: float, K: Box | None = None, tol: float = DEFAULT_INT_TOL) -> float:
    """``HK-integral over K of theta(|f| / alpha)``.

    The integrator runs at absolute tolerance ``tol * max(1, m)`` with ``m`` a
    coarse midpoint estimate of the modular, so that huge modulars (which only
    need to be told apart from 1) stay cheap.  Overflow gives ``+inf``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    K = K or f.domain
    g = f.map(lambda v: theta(v / alpha), label=f"{theta.name}(|f|/{alpha!r})")
    try:
        with np.errstate(over="ignore"):
            scale = max(1.0, _coarse_magnitude(g, K))
        if not math.isfinite(scale):
            return math.inf
        return hk_integrate(g, K, tol * scale).value
    except EvaluationError:
        # theta overflowed somewhere in K
        return math.inf


def luxemburg_norm(
    f: FuncExpr,
    theta: YoungFn,
    K: Box | None = None,
    tol: float = DEFAULT_NORM_TOL,
    int_tol: float = DEFAULT_INT_TOL,
) -> NormResult:
    """``inf{alpha > 0 : HK-integral over K of theta(|f| / alpha) <= 1}``."""
    K = K or f.domain
    return bisect_norm(lambda a: strong_modular(f, theta, a, K, int_tol), tol, {"int_tol": int_tol})


# weak --------------------------------------------------------------------


def _weak_profile(d, theta: YoungFn, alpha: float, ts: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        th = theta(ts)
        dv = d(alpha * ts)
        out = np.where(dv > 0, th * dv, 0.0)
    return np.nan_to_num(out, nan=math.inf)


def weak_modular(f: FuncExpr, theta: YoungFn, alpha: float, box: Box | None = None) -> float:
    """``sup_{t > 0} theta(t) * |{x in box : |f(x)| / alpha > t}|``.

    The supremum is taken over 512 log-spaced ``t`` in ``[1e-6 M, M]``
    (``M`` the essential sup of ``|f| / alpha``), the jump points of exact
    distribution metadata with their left approaches ``t (1 - 1e-9)``, and
    the kinks of the distribution, then refined locally around the best
    point.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    d = distribution(f, box)
    M = d.ess_sup / alpha
    if not M > 0:
        return 0.0
    ts = [np.geomspace(T_GRID_SPAN * M, M, T_GRID_POINTS)]
    jumps, _ = d.atoms()
    if len(jumps):
        ts += [jumps / alpha, jumps / alpha * (1 - LEFT_APPROACH)]
    kinks = d.kinks()
    if len(kinks):
        ts.append(kinks / alpha)
    ts = np.unique(np.concatenate(ts))
    ts = ts[ts > 0]
    vals = _weak_profile(d, theta, alpha, ts)
    best = float(np.max(vals))
    if not math.isfinite(best):
        return math.inf
    # zoom in twice around the grid maximiser
    i = int(np.argmax(vals))
    for _ in range(2):
        a = ts[max(i - 1, 0)]
        b = ts[min(i + 1, len(ts) - 1)]
        if not b > a:
            break
        ts = np.linspace(a, b, 65)
        vals = _weak_profile(d, theta, alpha, ts)
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
    return best


def weak_norm(f: FuncExpr, theta: YoungFn, box: Box | None = None, tol: float = DEFAULT_NORM_TOL) -> NormResult:
    """``inf{alpha > 0 : sup_t theta(t) |{|f| / alpha > t}| <= 1}``."""
    box = box or f.domain
    d = distribution(f, box)
    return bisect_norm(
        lambda a: weak_modular(f, theta, a, box),
        tol,
        {"distribution": d.mode, "level": d.level},
    )
