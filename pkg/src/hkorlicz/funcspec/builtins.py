"""Constructors for the built-in function catalogue."""

from __future__ import annotations

from typing import Iterable, Sequence

from .box import Box
from .expr import Const, FuncExpr, Indicator, Linear, OscDeriv, PiecewiseConst, Power

__all__ = [
    "indicator",
    "piecewise_const",
    "power",
    "linear",
    "constant",
    "osc_deriv",
    "BUILTINS",
]


def _check_inside(box: Box, domain: Box):
    if box.dim != domain.dim:
        raise ValueError(f"box {box} has dimension {box.dim}, domain has {domain.dim}")


def indicator(box: Box, domain: Box | None = None) -> FuncExpr:
    """Characteristic function of ``box`` (closed) on ``domain`` (defaults to ``box``)."""
    domain = domain or box
    _check_inside(box, domain)
    return FuncExpr(Indicator(box), domain)


def piecewise_const(pieces: Iterable[tuple[Box, float]], domain: Box) -> FuncExpr:
    pieces = tuple((b, float(v)) for b, v in pieces)
    if not pieces:
        raise ValueError("piecewise_const needs at least one piece")
    for b, _ in pieces:
        _check_inside(b, domain)
    return FuncExpr(PiecewiseConst(pieces), domain)


def power(p: float, domain: Box) -> FuncExpr:
    """``|x|^p`` with the max norm; ``p > 0``."""
    if not p > 0:
        raise ValueError(f"power exponent must be positive, got {p}")
    return FuncExpr(Power(float(p)), domain)


def linear(domain: Box, coeffs: Sequence[float] | None = None, offset: float = 0.0) -> FuncExpr:
    """``coeffs . x + offset``; all-ones coefficients by default."""
    if coeffs is None:
        coeffs = (1.0,) * domain.dim
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) != domain.dim:
        raise ValueError(f"need {domain.dim} coefficients, got {len(coeffs)}")
    return FuncExpr(Linear(coeffs, float(offset)), domain)


def constant(c: float, domain: Box) -> FuncExpr:
    return FuncExpr(Const(float(c)), domain)


def osc_deriv(domain: Box | None = None) -> FuncExpr:
    """Derivative of ``x^2 sin(1/x^2)`` (value at 0 undefined, singular point)."""
    domain = domain or Box((0.0,), (1.0,))
    if domain.dim != 1:
        raise ValueError("osc_deriv is one-dimensional")
    return FuncExpr(OscDeriv(), domain, ((0.0,),))


def _from_params(name: str, params: dict, domain: Box) -> FuncExpr:
    if name == "indicator":
        return indicator(Box.from_pairs(params["box"]), domain)
    if name == "piecewise_const":
        pieces = [(Box.from_pairs(p["box"]), p["value"]) for p in params["pieces"]]
        return piecewise_const(pieces, domain)
    if name == "power":
        return power(params["p"], domain)
    if name == "linear":
        return linear(domain, params.get("coeffs"), params.get("offset", 0.0))
    if name == "constant":
        return constant(params["c"], domain)
    if name == "osc_deriv":
        return osc_deriv(domain)
    raise ValueError(f"unknown builtin {name!r}")


BUILTINS = ("indicator", "piecewise_const", "power", "linear", "constant", "osc_deriv")
