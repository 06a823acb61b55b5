"""JSON function-spec files.

Format::

    {"kind": "expr" | "builtin",
     "expr": "x1^2*sin(1/x1^2)",                       # kind == "expr"
     "builtin": {"name": "indicator", "params": {...}}, # kind == "builtin"
     "domain": [[lo, hi], ...],
     "singular": [[coords], ...]}                       # optional
"""

from __future__ import annotations

import json
from pathlib import Path

from .box import Box
from .builtins import _from_params
from .expr import FuncExpr
from .parser import parse_expr

__all__ = ["SpecError", "function_from_spec", "load_function_spec"]


class SpecError(ValueError):
    pass


def function_from_spec(spec: dict) -> FuncExpr:
    if not isinstance(spec, dict):
        raise SpecError("function spec must be a JSON object")
    try:
        domain = Box.from_pairs(spec["domain"])
        kind = spec["kind"]
        singular = [tuple(s) for s in spec.get("singular") or []]
        if kind == "expr":
            return parse_expr(spec["expr"], domain.dim, domain, singular)
        if kind == "builtin":
            b = spec["builtin"]
            f = _from_params(b["name"], b.get("params") or {}, domain)
            if singular:
                f = FuncExpr(f.body, f.domain, f.singular + tuple(singular))
            return f
        raise SpecError(f"unknown kind {kind!r}")
    except SpecError:
        raise
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise SpecError(str(exc)) from exc


def load_function_spec(path: str | Path) -> FuncExpr:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"{path}: {exc}") from exc
    try:
        return function_from_spec(data)
    except SpecError as exc:
        raise SpecError(f"{path}: {exc}") from exc
