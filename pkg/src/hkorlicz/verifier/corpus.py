"""Verification corpora: named functions, Young functions and the pairings the checks use.

A corpus manifest is a JSON object::

    {"functions": [{"name": "chi", ...function spec... } | {"name": "chi", "path": "chi.json"}],
     "young":     [{"name": "power2", ...young spec... } | {"name": "p2", "path": "p2.json"}],
     "pairs":        [["f", "g"], ...],            # same domain
     "norm_young":   ["power2", ...],              # default: every Young function
     "holder_young": ["power2", ...],
     "triangle_young": ["power1", ...],
     "dominating":   [["theta1", "theta2", C], ...],
     "non_dominating": [["theta1", "theta2"], ...],
     "minorants":    {"power2": [r, s], ...},
     "indicator_cases": [{"n": 1, "r": 0.5, "young": "power2"}, ...],
     "convergence":  [{"h": "f", "B": [[lo, hi], ...], "young": "power1"}, ...],
     "derivative_cases": [{"name": "osc", "function": "f", "exact": 0.84}, ...],
     "tolerances": {"int_tol": 1e-4, "norm_tol": 1e-5}}

Relative ``path`` entries resolve against the manifest's directory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .. import young as Y
from ..funcspec import (
    Box,
    FuncExpr,
    constant,
    function_from_spec,
    indicator,
    linear,
    load_function_spec,
    osc_deriv,
    parse_expr,
    piecewise_const,
    power,
)

__all__ = [
    "Corpus",
    "CorpusError",
    "default_corpus",
    "load_corpus",
    "dominating_table",
]


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Corpus:
    functions: dict[str, FuncExpr]
    young: dict[str, Y.YoungFn]
    pairs: tuple[tuple[str, str], ...] = ()
    norm_young: tuple[str, ...] = ()
    holder_young: tuple[str, ...] = ()
    triangle_young: tuple[str, ...] = ()
    dominating: tuple[tuple[str, str, float], ...] = ()
    non_dominating: tuple[tuple[str, str], ...] = ()
    minorants: dict[str, tuple[float, float]] = field(default_factory=dict)
    indicator_cases: tuple[tuple[int, float, str], ...] = ()
    convergence: tuple[tuple[str, Box, str], ...] = ()
    derivative_cases: tuple[tuple[str, FuncExpr, float], ...] = ()
    int_tol: float = 1e-4
    norm_tol: float = 1e-5

    def __post_init__(self):
        for a, b in self.pairs:
            self._need_fn(a)
            self._need_fn(b)
            if self.functions[a].domain != self.functions[b].domain:
                raise CorpusError(f"pair ({a}, {b}) mixes domains")
        for name in self.norm_young + self.holder_young + self.triangle_young + tuple(self.minorants):
            self._need_young(name)
        for a, b, *_ in self.dominating + self.non_dominating:
            self._need_young(a)
            self._need_young(b)
        for _, _, name in self.indicator_cases:
            self._need_young(name)
        for h, _, name in self.convergence:
            self._need_fn(h)
            self._need_young(name)

    def _need_fn(self, name):
        if name not in self.functions:
            raise CorpusError(f"unknown function {name!r}")

    def _need_young(self, name):
        if name not in self.young:
            raise CorpusError(f"unknown Young function {name!r}")

    def with_extra(self, functions: dict | None = None, young: dict | None = None) -> "Corpus":
        """Copy with additional functions / Young functions (names must be new)."""
        fns = dict(self.functions)
        ys = dict(self.young)
        for name, f in (functions or {}).items():
            if name in fns:
                raise CorpusError(f"duplicate function name {name!r}")
            fns[name] = f
        for name, th in (young or {}).items():
            if name in ys:
                raise CorpusError(f"duplicate Young function name {name!r}")
            ys[name] = th
        added = tuple(n for n in (young or {}) if n not in self.norm_young)
        return replace(self, functions=fns, young=ys, norm_young=self.norm_young + added)


def _quartic_table() -> Y.YoungFn:
    # t^2 + t^4 sampled densely; chords of a convex function lie above it
    xs = np.concatenate([[0.0], np.geomspace(1e-8, 1e8, 3201)])
    return Y.table(xs, xs**2 + xs**4, name="table(t^2+t^4)")


def dominating_table() -> list[tuple[str, str, float]]:
    return [
        ("power1", "scaled_power(1,2)", 0.5),
        ("power2", "table(t^2+t^4)", 1.0),
        ("scaled_power(2,1/2)", "power2", 2**-0.5),
        ("power2", "scaled_power(2,1/2)", 2**0.5),
        ("log1p", "power1", 1.0),
        ("power1", "expm", 1.0),
        ("power2", "power2", 1.0),
    ]


def default_corpus() -> Corpus:
    I02 = Box((0.0,), (2.0,))
    I01 = Box((0.0,), (1.0,))
    Q02 = Box((0.0, 0.0), (2.0, 2.0))
    Q01 = Box((0.0, 0.0), (1.0, 1.0))
    chi = indicator(Box((0.0,), (1.0,)), I02)
    fns = {
        "chi[0,1]": chi,
        "2chi[0,1]": 2 * chi,
        "chi[1,2]": indicator(Box((1.0,), (2.0,)), I02),
        "step3": piecewise_const(
            [(Box((0.0,), (0.5,)), 3.0), (Box((0.5,), (1.25,)), -1.0), (Box((1.25,), (2.0,)), 0.5)], I02
        ),
        "zero": constant(0.0, I02),
        "const0.7": constant(0.7, I02),
        "x": linear(I01),
        "|x|^2": power(2.0, I01),
        "|x|^0.5": power(0.5, I01),
        "2x-1": linear(I01, (2.0,), -1.0),
        "sin(2pi x)": parse_expr("sin(6.283185307179586*x1)", 1, I01),
        "osc'[0.1,1]": osc_deriv(Box((0.1,), (1.0,))),
        "chi[0,1]^2": indicator(Box((0.0, 0.0), (1.0, 1.0)), Q02),
        "step2d": piecewise_const(
            [(Box((0.0, 0.0), (1.0, 2.0)), 1.0), (Box((1.0, 0.0), (2.0, 1.0)), -2.0), (Box((1.0, 1.0), (2.0, 2.0)), 0.25)],
            Q02,
        ),
        "chi[0.5,1.5]^2": indicator(Box((0.5, 0.5), (1.5, 1.5)), Q02),
        "x1*x2": parse_expr("x1*x2", 2, Q01),
    }
    young = {
        "power1": Y.power(1),
        "power2": Y.power(2),
        "power3": Y.power(3),
        "expm": Y.expm(),
        "scaled_power(2,1/2)": Y.scaled_power(2, 0.5),
        "log1p": Y.log1p(),
        "scaled_power(1,2)": Y.scaled_power(1, 2),
        "table(t^2+t^4)": _quartic_table(),
    }
    pairs = (
        ("chi[0,1]", "chi[0,1]"),
        ("zero", "chi[0,1]"),
        ("chi[0,1]", "chi[1,2]"),
        ("step3", "chi[0,1]"),
        ("step3", "const0.7"),
        ("x", "|x|^2"),
        ("x", "sin(2pi x)"),
        ("2x-1", "|x|^0.5"),
        ("chi[0,1]^2", "step2d"),
        ("chi[0,1]^2", "chi[0.5,1.5]^2"),
    )
    indicator_cases = tuple(
        (n, r, th)
        for n in (1, 2)
        for r in (0.25, 0.5, 1.0)
        for th in ("power1", "power2", "power3", "expm", "scaled_power(2,1/2)")
    )
    osc01 = osc_deriv(I01)
    return Corpus(
        functions=fns,
        young=young,
        pairs=pairs,
        norm_young=("power1", "power2", "power3", "expm", "scaled_power(2,1/2)", "log1p"),
        holder_young=("scaled_power(2,1/2)", "power2", "power3", "expm"),
        triangle_young=("power1", "power2"),
        dominating=tuple(dominating_table()),
        non_dominating=(("power1", "power2"),),
        minorants={
            "power1": (1.0, 0.0),
            "power2": (1.0, 0.25),
            "power3": (1.0, 2.0 / (3.0 * math.sqrt(3.0))),
            "expm": (1.0, 0.0),
            "scaled_power(2,1/2)": (1.0, 0.5),
        },
        indicator_cases=indicator_cases,
        convergence=(
            ("zero", Box((0.0,), (1.0,)), "power1"),
            ("x", Box((0.0,), (0.5,)), "power2"),
            ("step3", Box((0.5,), (1.5,)), "power1"),
            ("chi[0,1]^2", Box((0.5, 0.5), (1.5, 1.5)), "power2"),
        ),
        derivative_cases=(("osc'[0,1]", osc01, math.sin(1.0)),),
    )


# manifests -----------------------------------------------------------------


def _resolve(entry: dict, base: Path, loader, inline):
    if "path" in entry:
        return loader(base / entry["path"])
    body = {k: v for k, v in entry.items() if k != "name"}
    return inline(body)


def load_corpus(path: str | Path) -> Corpus:
    """Load a corpus manifest; every error names the offending file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"{path}: {exc}") from exc
    base = path.parent
    try:
        fns = {}
        for e in data.get("functions", []):
            fns[e["name"]] = _resolve(e, base, load_function_spec, function_from_spec)
        ys = {}
        for e in data.get("young", []):
            ys[e["name"]] = _resolve(e, base, Y.load_young_spec, Y.young_from_spec)
        tol = data.get("tolerances", {})
        derivative = []
        for e in data.get("derivative_cases", []):
            derivative.append((e["name"], fns[e["function"]], float(e["exact"])))
        return Corpus(
            functions=fns,
            young=ys,
            pairs=tuple(tuple(p) for p in data.get("pairs", [])),
            norm_young=tuple(data.get("norm_young", list(ys))),
            holder_young=tuple(data.get("holder_young", [])),
            triangle_young=tuple(data.get("triangle_young", [])),
            dominating=tuple((a, b, float(c)) for a, b, c in data.get("dominating", [])),
            non_dominating=tuple(tuple(p) for p in data.get("non_dominating", [])),
            minorants={k: (float(r), float(s)) for k, (r, s) in data.get("minorants", {}).items()},
            indicator_cases=tuple(
                (int(e["n"]), float(e["r"]), e["young"]) for e in data.get("indicator_cases", [])
            ),
            convergence=tuple(
                (e["h"], Box.from_pairs(e["B"]), e["young"]) for e in data.get("convergence", [])
            ),
            derivative_cases=tuple(derivative),
            int_tol=float(tol.get("int_tol", 1e-4)),
            norm_tol=float(tol.get("norm_tol", 1e-5)),
        )
    except KeyError as exc:
        raise CorpusError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        # nested spec errors already name their own file; keep both
        raise CorpusError(f"{path}: {exc}") from exc
