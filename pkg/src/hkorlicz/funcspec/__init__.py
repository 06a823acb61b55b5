"""Test functions: boxes, expressions, the built-in catalogue and exact metadata."""

from .box import Box
from .builtins import constant, indicator, linear, osc_deriv, piecewise_const, power
from .exact import exact_distribution, exact_integral, exact_lp
from .expr import (
    DomainError,
    EvaluationError,
    FuncExpr,
    NonFiniteError,
    SingularPointError,
    evaluate,
    osc_antiderivative,
    to_text,
)
from .parser import ParseError, parse, parse_expr
from .specfile import SpecError, function_from_spec, load_function_spec

__all__ = [
    "Box",
    "FuncExpr",
    "ParseError",
    "SpecError",
    "EvaluationError",
    "DomainError",
    "SingularPointError",
    "NonFiniteError",
    "parse",
    "parse_expr",
    "evaluate",
    "to_text",
    "indicator",
    "piecewise_const",
    "power",
    "linear",
    "constant",
    "osc_deriv",
    "osc_antiderivative",
    "exact_distribution",
    "exact_integral",
    "exact_lp",
    "function_from_spec",
    "load_function_spec",
]
