"""Expression trees and the :class:`FuncExpr` function type.

Nodes are immutable and evaluate vectorised over an ``(m, n)`` array of
points.  Built-in functions (indicators, step functions, powers, ...) are
ordinary leaves of the tree, so sums, products and rescalings of built-ins are
themselves expression trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .box import Box

__all__ = [
    "EvaluationError",
    "DomainError",
    "SingularPointError",
    "NonFiniteError",
    "Node",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Indicator",
    "PiecewiseConst",
    "Power",
    "Linear",
    "OscDeriv",
    "Apply",
    "FuncExpr",
    "evaluate",
    "to_text",
]


class EvaluationError(ValueError):
    pass


class DomainError(EvaluationError):
    pass


class SingularPointError(EvaluationError):
    pass


class NonFiniteError(EvaluationError, ArithmeticError):
    pass


FUNCTIONS: dict[str, tuple[int, Callable]] = {
    # name -> (arity, ufunc); arity -1 means two or more
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "log": (1, np.log),
    "abs": (1, np.abs),
    "min": (-1, np.minimum),
    "max": (-1, np.maximum),
}

_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}


class Node:
    """Base class of expression nodes."""

    children: tuple = ()

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_step(self) -> bool:
        """True if the node is constant on the cells cut out by its breakpoints."""
        return all(c.is_step for c in self.children)

    def breakpoints(self, dim: int) -> list[set[float]]:
        out: list[set[float]] = [set() for _ in range(dim)]
        for c in self.children:
            for axis, pts in enumerate(c.breakpoints(dim)):
                out[axis] |= pts
        return out


@dataclass(frozen=True)
class Const(Node):
    value: float

    def evaluate(self, X):
        return np.full(X.shape[0], float(self.value))


@dataclass(frozen=True)
class Var(Node):
    index: int  # zero-based

    def evaluate(self, X):
        return X[:, self.index].astype(float, copy=False)

    @property
    def is_step(self):
        return False


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    @property
    def children(self):
        return (self.arg,)

    def evaluate(self, X):
        return -self.arg.evaluate(X)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    @property
    def children(self):
        return (self.left, self.right)

    def evaluate(self, X):
        with np.errstate(all="ignore"):
            return _BINARY[self.op](self.left.evaluate(X), self.right.evaluate(X))


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple[Node, ...]

    @property
    def children(self):
        return self.args

    def evaluate(self, X):
        fn = FUNCTIONS[self.name][1]
        vals = [a.evaluate(X) for a in self.args]
        with np.errstate(all="ignore"):
            out = vals[0] if len(vals) > 1 else fn(vals[0])
            for v in vals[1:]:
                out = fn(out, v)
        return out


@dataclass(frozen=True)
class PiecewiseConst(Node):
    """Sum of ``value * indicator(box)`` over the pieces."""

    pieces: tuple[tuple[Box, float], ...]

    def evaluate(self, X):
        out = np.zeros(X.shape[0])
        for box, value in self.pieces:
            lo, hi = box.as_arrays()
            inside = np.all((X >= lo) & (X <= hi), axis=1)
            out += np.where(inside, float(value), 0.0)
        return out

    def breakpoints(self, dim):
        out: list[set[float]] = [set() for _ in range(dim)]
        for box, _ in self.pieces:
            for axis in range(dim):
                out[axis].update((box.lower[axis], box.upper[axis]))
        return out


class Indicator(PiecewiseConst):
    def __init__(self, box: Box):
        object.__setattr__(self, "pieces", ((box, 1.0),))

    @property
    def box(self) -> Box:
        return self.pieces[0][0]


@dataclass(frozen=True)
class Power(Node):
    """``|x|^p`` with the max norm ``|x| = max_i |x_i|``."""

    p: float

    def evaluate(self, X):
        r = np.max(np.abs(X), axis=1)
        with np.errstate(all="ignore"):
            return r ** self.p

    @property
    def is_step(self):
        return False


@dataclass(frozen=True)
class Linear(Node):
    coeffs: tuple[float, ...]
    offset: float = 0.0

    def evaluate(self, X):
        return X @ np.asarray(self.coeffs, dtype=float) + self.offset

    @property
    def is_step(self):
        return False


def osc_antiderivative(x: float) -> float:
    """``F(x) = x^2 sin(1/x^2)`` with ``F(0) = 0``."""
    return 0.0 if x == 0 else x * x * math.sin(1.0 / (x * x))


@dataclass(frozen=True)
class OscDeriv(Node):
    """Derivative of ``x^2 sin(1/x^2)``: bounded-variation fails at 0, HK does not."""

    def evaluate(self, X):
        x = X[:, 0]
        with np.errstate(all="ignore"):
            u = 1.0 / (x * x)
            return 2.0 * x * np.sin(u) - (2.0 / x) * np.cos(u)

    @property
    def is_step(self):
        return False


@dataclass(frozen=True, eq=False)
class Apply(Node):
    """Opaque elementwise map applied to a subtree (not printable)."""

    fn: Callable[[np.ndarray], np.ndarray]
    arg: Node
    label: str = "apply"

    @property
    def children(self):
        return (self.arg,)

    def evaluate(self, X):
        v = self.arg.evaluate(X)
        if not np.all(np.isfinite(v)):
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise NonFiniteError(f"non-finite value {v[bad]!r} at {tuple(X[bad])} before {self.label}")
        return self.fn(v)


def to_text(node: Node) -> str:
    """Fully parenthesised text that parses back to an equal-valued tree."""
    if isinstance(node, Const):
        v = float(node.value)
        if not math.isfinite(v):
            raise ValueError(f"cannot print non-finite constant {v!r}")
        return repr(v) if v >= 0 else f"(-{repr(-v)})"
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)}{node.op}{to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({','.join(to_text(a) for a in node.args)})"
    if isinstance(node, Linear):
        terms = [f"({to_text(Const(c))}*x{i + 1})" for i, c in enumerate(node.coeffs)]
        return "(" + "+".join(terms + [to_text(Const(node.offset))]) + ")"
    raise ValueError(f"{type(node).__name__} has no text form")


def _as_node(value) -> Node:
    if isinstance(value, Node):
        return value
    return Const(float(value))


@dataclass(frozen=True)
class FuncExpr:
    """A real function on a box, with a finite set of singular points.

    Arithmetic with numbers or other ``FuncExpr`` objects on the same domain
    builds new expression trees.
    """

    body: Node
    domain: Box
    singular: tuple[tuple[float, ...], ...] = field(default=())

    def __post_init__(self):
        pts = []
        for s in self.singular:
            s = tuple(float(v) for v in s)
            if len(s) != self.domain.dim:
                raise ValueError(f"singular point {s!r} has wrong dimension")
            if self.domain.contains(s) and s not in pts:
                pts.append(s)
        object.__setattr__(self, "singular", tuple(sorted(pts)))

    @property
    def dim(self) -> int:
        return self.domain.dim

    def values(self, X: np.ndarray) -> np.ndarray:
        """Evaluate at the rows of ``X``; no domain or singular-set checks."""
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        v = np.asarray(self.body.evaluate(X), dtype=float)
        if v.shape != (X.shape[0],):
            v = np.broadcast_to(v, (X.shape[0],)).copy()
        if not np.all(np.isfinite(v)):
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise NonFiniteError(f"non-finite value {v[bad]!r} at {tuple(X[bad])}")
        return v

    def __call__(self, point: Sequence[float] | float) -> float:
        point = tuple(np.atleast_1d(np.asarray(point, dtype=float)))
        if len(point) != self.dim:
            raise DomainError(f"point {point!r} has dimension {len(point)}, expected {self.dim}")
        if not self.domain.contains(point):
            raise DomainError(f"point {point!r} outside domain {self.domain}")
        if point in self.singular:
            raise SingularPointError(f"evaluation at singular point {point!r}")
        return float(self.values(np.array([point]))[0])

    def text(self) -> str:
        return to_text(self.body)

    def breakpoints(self) -> list[list[float]]:
        return [sorted(s) for s in self.body.breakpoints(self.dim)]

    # algebra -------------------------------------------------------------

    def _combine(self, other, op: str, reverse=False) -> "FuncExpr":
        if isinstance(other, FuncExpr):
            if other.domain != self.domain:
                raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")
            rhs, sing = other.body, self.singular + other.singular
        else:
            rhs, sing = _as_node(other), self.singular
        left, right = (rhs, self.body) if reverse else (self.body, rhs)
        return FuncExpr(BinOp(op, left, right), self.domain, sing)

    def __add__(self, other):
        return self._combine(other, "+")

    def __radd__(self, other):
        return self._combine(other, "+", reverse=True)

    def __sub__(self, other):
        return self._combine(other, "-")

    def __rsub__(self, other):
        return self._combine(other, "-", reverse=True)

    def __mul__(self, other):
        return self._combine(other, "*")

    def __rmul__(self, other):
        return self._combine(other, "*", reverse=True)

    def __truediv__(self, other):
        return self._combine(other, "/")

    def __neg__(self):
        return FuncExpr(Neg(self.body), self.domain, self.singular)

    def __abs__(self):
        return FuncExpr(Call("abs", (self.body,)), self.domain, self.singular)

    def map(self, fn: Callable[[np.ndarray], np.ndarray], label: str = "apply") -> "FuncExpr":
        """Compose with an elementwise function ``fn``."""
        return FuncExpr(Apply(fn, self.body, label), self.domain, self.singular)

    def restrict(self, box: Box) -> "FuncExpr":
        if not self.domain.contains_box(box):
            raise DomainError(f"{box} is not inside the domain {self.domain}")
        return FuncExpr(self.body, box, self.singular)


def evaluate(f: FuncExpr, point) -> float:
    """Value of ``f`` at ``point`` with domain and singular-set checks."""
    return f(point)
