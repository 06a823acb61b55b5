"""Gauge (Henstock-Kurzweil) integration, Young functions, and strong and weak Orlicz norms."""

from . import young
from .funcspec import Box, FuncExpr, indicator, osc_deriv, parse_expr
from .hkint import ConvergenceError, alexiewicz_norm, cousin_partition, hk_integrate, is_delta_fine, riemann_sum
from .measure import ball_volume, dist, distribution
from .norms import NormResult, luxemburg_norm, strong_modular, weak_modular, weak_norm

__all__ = [
    "young",
    "Box",
    "FuncExpr",
    "indicator",
    "osc_deriv",
    "parse_expr",
    "ConvergenceError",
    "alexiewicz_norm",
    "cousin_partition",
    "hk_integrate",
    "is_delta_fine",
    "riemann_sum",
    "ball_volume",
    "dist",
    "distribution",
    "NormResult",
    "luxemburg_norm",
    "strong_modular",
    "weak_modular",
    "weak_norm",
]

__version__ = "0.1.0"
