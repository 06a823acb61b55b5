"""Young functions, their classification predicates and complementary functions.

A Young function here is finite-valued, even, vanishes at 0, is nondecreasing
on ``[0, inf)`` and tends to infinity.  Predicates that concern limits
(``is_delta2``, ``is_delta_prime``) are grid-based semi-decisions; each verdict
comes with the numbers it was based on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "YoungFn",
    "Verdict",
    "power",
    "scaled_power",
    "expm",
    "log1p",
    "table",
    "y_eval",
    "y_inverse",
    "complementary",
    "is_delta2",
    "is_delta_prime",
    "dominates",
    "dominance_grid",
    "young_from_spec",
    "load_young_spec",
]

FAMILIES = ("power", "scaled_power", "expm", "log1p", "table")


@dataclass(frozen=True)
class YoungFn:
    family: str
    params: tuple = ()
    convex: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown Young family {self.family!r}")
        if not self.name:
            object.__setattr__(self, "name", _default_name(self))

    def __call__(self, t):
        """Vectorised ``theta(|t|)``."""
        a = np.abs(np.asarray(t, dtype=float))
        with np.errstate(over="ignore"):
            if self.family == "power":
                out = a ** self.params[0]
            elif self.family == "scaled_power":
                p, c = self.params
                out = c * a ** p
            elif self.family == "expm":
                out = np.expm1(a)
            elif self.family == "log1p":
                out = np.log1p(a)
            else:
                out = _table_eval(self.params[0], self.params[1], a)
        return out if out.ndim else float(out)

    @property
    def strictly_increasing(self) -> bool:
        if self.family != "table":
            return True
        return bool(np.all(np.diff(self.params[1]) > 0))

    def to_spec(self) -> dict:
        if self.family == "power":
            params = {"p": self.params[0]}
        elif self.family == "scaled_power":
            params = {"p": self.params[0], "c": self.params[1]}
        elif self.family == "table":
            params = {"x": list(self.params[0]), "y": list(self.params[1])}
        else:
            params = {}
        return {"family": self.family, "params": params}


def _default_name(th: YoungFn) -> str:
    if th.family == "power":
        return f"power({th.params[0]:g})"
    if th.family == "scaled_power":
        return f"scaled_power({th.params[0]:g},{th.params[1]:g})"
    if th.family == "table":
        return f"table[{len(th.params[0])}]"
    return th.family


def _table_eval(xs, ys, a):
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    out = np.interp(a, xs, ys)
    # linear extrapolation beyond the last node
    slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
    beyond = a > xs[-1]
    return np.where(beyond, ys[-1] + slope * (a - xs[-1]), out)


def power(p: float) -> YoungFn:
    if p < 1:
        raise ValueError(f"power family needs p >= 1, got {p}")
    return YoungFn("power", (float(p),), True)


def scaled_power(p: float, c: float) -> YoungFn:
    if p < 1 or c <= 0:
        raise ValueError(f"scaled_power needs p >= 1 and c > 0, got p={p}, c={c}")
    return YoungFn("scaled_power", (float(p), float(c)), True)


def expm() -> YoungFn:
    return YoungFn("expm", (), True)


def log1p() -> YoungFn:
    return YoungFn("log1p", (), False)


def table(xs: Sequence[float], ys: Sequence[float], convex: bool | None = None, name: str = "") -> YoungFn:
    """Piecewise-linear Young function through ``(xs[i], ys[i])``.

    ``xs`` must start at 0, be strictly increasing and ``ys`` must start at 0
    and be nondecreasing with a positive final slope.
    """
    xs = tuple(float(v) for v in xs)
    ys = tuple(float(v) for v in ys)
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("table needs at least two (x, y) pairs of equal length")
    if xs[0] != 0.0 or ys[0] != 0.0:
        raise ValueError("table must start at (0, 0)")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("table x values must be strictly increasing")
    if any(b < a for a, b in zip(ys, ys[1:])):
        raise ValueError("table y values must be nondecreasing")
    if not ys[-1] > ys[-2]:
        raise ValueError("table must end with a positive slope so that it grows to infinity")
    if convex is None:
        slopes = np.diff(ys) / np.diff(xs)
        convex = bool(np.all(np.diff(slopes) >= -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))))
    return YoungFn("table", (xs, ys), convex, name)


def y_eval(theta: YoungFn, t: float) -> float:
    return float(theta(t))


def y_inverse(theta: YoungFn, u: float, *, tol: float = 1e-12, max_doublings: int = 1100) -> float:
    """Smallest ``t >= 0`` with ``theta(t) >= u``.

    Closed form for the power families; bracketing plus bisection otherwise.
    """
    if u < 0 or math.isnan(u):
        raise ValueError(f"y_inverse needs u >= 0, got {u}")
    if math.isinf(u):
        raise ValueError(f"u={u} is beyond the reachable range of {theta.name}")
    if u == 0:
        return 0.0
    if theta.family == "power":
        return u ** (1.0 / theta.params[0])
    if theta.family == "scaled_power":
        p, c = theta.params
        return (u / c) ** (1.0 / p)
    lo, hi = 0.0, 1.0
    for _ in range(max_doublings):
        if theta(hi) >= u:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ValueError(f"u={u} is beyond the reachable range of {theta.name}")
    if math.isinf(hi):
        raise ValueError(f"u={u} is beyond the reachable range of {theta.name}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if theta(mid) >= u:
            hi = mid
        else:
            lo = mid
    return hi


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _conjugate_values(theta: YoungFn, s: np.ndarray, iterations: int = 120, max_doublings: int = 400) -> np.ndarray:
    """``sup_{x >= 0} (x s - theta(x))`` for each entry of ``s`` (vectorised).

    Entries whose supremum is not reached within the bracketing budget are +inf.
    """

    def g(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return x * s - theta(x)

    b = np.ones_like(s)
    active = g(2 * b) > g(b)
    for _ in range(max_doublings):
        if not active.any():
            break
        b = np.where(active, 2 * b, b)
        active = active & (g(2 * b) > g(b))
    unbounded = active
    lo = np.zeros_like(s)
    hi = 2 * b
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    for _ in range(iterations):
        left = g1 < g2  # maximum lies in [x1, hi]
        lo = np.where(left, x1, lo)
        hi = np.where(left, hi, x2)
        new_x1 = np.where(left, x2, hi - _GOLDEN * (hi - lo))
        new_x2 = np.where(left, lo + _GOLDEN * (hi - lo), x1)
        x1, x2 = new_x1, new_x2
        gn = g(np.where(left, x2, x1))
        g1, g2 = np.where(left, g2, gn), np.where(left, gn, g1)
    best = np.maximum(g1, g2)
    if theta.family == "table":
        # piecewise-linear: the supremum is attained at a node
        xs = np.asarray(theta.params[0])
        ys = np.asarray(theta.params[1])
        best = np.maximum(best, np.max(np.outer(s, xs) - ys, axis=1))
    return np.where(unbounded, np.inf, np.maximum(best, 0.0))


def complementary(theta: YoungFn, grid: tuple[float, float, int] = (1e-6, 1e6, 721)) -> YoungFn:
    """Tabulated complementary function ``phi(s) = sup_{x>=0} (x s - theta(x))``.

    ``grid`` is ``(s_min, s_max, n)``: ``n`` log-spaced nodes plus the node 0.
    Where the supremum is infinite (``s`` beyond the final slope of a table,
    say) the table ends at the last finite node.
    """
    if not theta.convex:
        raise ValueError(f"complementary function requires a convex Young function, got {theta.name}")
    smin, smax, n = grid
    s = np.concatenate([[0.0], np.geomspace(smin, smax, int(n))])
    phi = _conjugate_values(theta, s)
    finite = np.isfinite(phi)
    stop = len(phi) if finite.all() else int(np.argmin(finite))
    if stop < 3:
        raise ValueError(f"complementary function of {theta.name} is not finite on the requested grid")
    s, phi = s[:stop], phi[:stop]
    phi[0] = 0.0
    phi = np.maximum.accumulate(phi)
    if not phi[-1] > phi[-2]:
        raise ValueError(f"complementary function of {theta.name} does not grow on the requested grid")
    return table(s, phi, convex=True, name=f"conj({theta.name})")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: float
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.holds


def _ratio(num, den):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.asarray(num, dtype=float) / np.asarray(den, dtype=float)
    return np.where(np.isfinite(r), r, np.inf)


def is_delta2(theta: YoungFn, *, x_max: float = 1e6, points_per_decade: int = 100) -> Verdict:
    """Doubling condition for large arguments.

    The witness is ``sup theta(2x)/theta(x)`` over a log grid on ``[1, x_max]``.
    The verdict is true when that sup is finite and does not grow when the grid
    extent is doubled (in log scale) or the grid is refined.
    """
    decades = math.log10(x_max)

    def sup_ratio(top_decades, ppd):
        x = np.logspace(0.0, top_decades, int(round(top_decades * ppd)) + 1)
        return float(np.max(_ratio(theta(2 * x), theta(x))))

    base = sup_ratio(decades, points_per_decade)
    extended = sup_ratio(2 * decades, points_per_decade)
    refined = sup_ratio(decades, 2 * points_per_decade)
    stable = math.isfinite(base) and extended <= base * (1 + 1e-9) and refined <= base * (1 + 1e-6)
    return Verdict(stable, base, {"sup": base, "sup_extended": extended, "sup_refined": refined})


def is_delta_prime(theta: YoungFn, *, t_range: tuple[float, float] = (1e-6, 1e6), points: int = 1201, threshold: float = 1e-3) -> Verdict:
    """``lim_{k->0} sup_{t>0} theta(k t)/theta(t) = 0`` on a finite grid.

    ``S(k)`` is the grid sup for ``k = 2^-1 .. 2^-20``; the verdict is true when
    ``S`` falls below ``threshold``.  The witness is ``S(2^-20)``.  ``details``
    also records the ratio at the largest grid ``t`` for every ``k``.
    """
    t = np.geomspace(t_range[0], t_range[1], points)
    th_t = theta(t)
    ks = [2.0 ** -j for j in range(1, 21)]
    S = [float(np.max(_ratio(theta(k * t), th_t))) for k in ks]
    at_top = [float(_ratio(theta(k * t[-1]), th_t[-1])) for k in ks]
    holds = min(S) < threshold
    return Verdict(holds, S[-1], {"k": ks, "S": S, "t_max": float(t[-1]), "ratio_at_t_max": at_top})


def dominance_grid(c_range: tuple[float, float] = (1e-4, 1e4), per_octave: int = 16) -> np.ndarray:
    """Candidate constants ``2^(j/per_octave)`` inside ``c_range``."""
    jlo = math.ceil(math.log2(c_range[0]) * per_octave)
    jhi = math.floor(math.log2(c_range[1]) * per_octave)
    return 2.0 ** (np.arange(jlo, jhi + 1) / per_octave)


def dominates(
    theta1: YoungFn,
    theta2: YoungFn,
    *,
    c_range: tuple[float, float] = (1e-4, 1e4),
    t_range: tuple[float, float] = (1e-6, 1e6),
    t_points: int = 1201,
    rel: float = 1e-9,
) -> float | None:
    """Smallest grid constant ``C`` with ``theta1(t) <= theta2(C t)`` on a log t-grid.

    Returns ``None`` when no grid constant works.
    """
    t = np.geomspace(t_range[0], t_range[1], t_points)
    lhs = theta1(t)
    for C in dominance_grid(c_range):
        with np.errstate(over="ignore"):
            rhs = theta2(C * t)
        if np.all(lhs <= rhs * (1 + rel)):
            return float(C)
    return None


def young_from_spec(spec: dict) -> YoungFn:
    if not isinstance(spec, dict):
        raise ValueError("young spec must be a JSON object")
    family = spec.get("family")
    params = spec.get("params") or {}
    try:
        if family == "power":
            return power(params["p"])
        if family == "scaled_power":
            return scaled_power(params["p"], params["c"])
        if family == "expm":
            return expm()
        if family == "log1p":
            return log1p()
        if family == "table":
            if "points" in params:
                xs, ys = zip(*params["points"])
            else:
                xs, ys = params["x"], params["y"]
            return table(xs, ys)
    except KeyError as exc:
        raise ValueError(f"missing parameter {exc.args[0]!r} for family {family!r}") from exc
    except TypeError as exc:
        raise ValueError(f"bad parameters for family {family!r}: {exc}") from exc
    raise ValueError(f"unknown Young family {family!r}")


def load_young_spec(path: str | Path) -> YoungFn:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        return young_from_spec(data)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc
