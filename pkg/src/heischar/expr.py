"""Tiny expression language for planar profile fields.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' '-'? INT)?     # integer exponents only
    atom   := NUMBER | NAME | '(' expr ')'

``NAME`` is either a planar variable (``x`` for the t-coordinate, ``y`` for the
|z|^2-coordinate) or a constant bound at parse time.  ``-x^2`` means ``-(x^2)``.
Parsing goes through Python's ``ast`` after mapping ``^`` to ``**``; any node
outside the grammar is rejected.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import ExpressionError

VARIABLES = ("x", "y")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Neg, Bin, Pow]

_BINOPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/"}
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _int_exponent(node: ast.AST) -> int:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        sign, node = -1, node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return sign * node.value
    raise ExpressionError("exponents must be integer literals")


def _convert(node: ast.AST, constants: Mapping[str, float]) -> Node:
    if isinstance(node, ast.Expression):
        return _convert(node.body, constants)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return Num(float(node.value))
    if isinstance(node, ast.Name):
        if node.id in VARIABLES:
            return Var(node.id)
        if node.id in constants:
            return Num(float(constants[node.id]))
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp):
        arg = _convert(node.operand, constants)
        if isinstance(node.op, ast.USub):
            # literals and bound constants fold, so rendering and re-parsing is stable
            return Num(-arg.value) if isinstance(arg, Num) else Neg(arg)
        if isinstance(node.op, ast.UAdd):
            return arg
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return Pow(_convert(node.left, constants), _int_exponent(node.right))
        op = _BINOPS.get(type(node.op))
        if op is not None:
            return Bin(op, _convert(node.left, constants), _convert(node.right, constants))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse(text: str, constants: Mapping[str, float] | None = None) -> Node:
    constants = dict(constants or {})
    bad = set(constants) & set(VARIABLES)
    if bad:
        raise ExpressionError(f"constants shadow variables: {sorted(bad)}")
    if "**" in text:
        raise ExpressionError("use '^' for powers")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    return _convert(tree, constants)


def evaluate(node: Node, x, y):
    if isinstance(node, Num):
        return node.value + 0.0 * np.asarray(x, float)
    if isinstance(node, Var):
        return np.asarray(x if node.name == "x" else y, float)
    if isinstance(node, Neg):
        return -evaluate(node.arg, x, y)
    if isinstance(node, Pow):
        return evaluate(node.base, x, y) ** node.exponent
    a, b = evaluate(node.left, x, y), evaluate(node.right, x, y)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


def to_source(node: Node) -> str:
    """Render with the minimum parentheses needed to parse back to the same tree."""
    if isinstance(node, Num):
        return repr(node.value) if node.value >= 0 else f"({node.value!r})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = to_source(node.arg)
        return f"-{inner}" if isinstance(node.arg, (Num, Var, Pow)) else f"-({inner})"
    if isinstance(node, Pow):
        base = to_source(node.base)
        if not isinstance(node.base, (Num, Var)):
            base = f"({base})"
        exp = str(node.exponent) if node.exponent >= 0 else f"-{-node.exponent}"
        return f"{base}^{exp}"
    p = _PREC[node.op]
    left = to_source(node.left)
    if isinstance(node.left, Bin) and _PREC[node.left.op] < p:
        left = f"({left})"
    right = to_source(node.right)
    if isinstance(node.right, Bin) and _PREC[node.right.op] <= p:
        right = f"({right})"
    elif isinstance(node.right, Neg):
        right = f"({right})"
    return f"{left} {node.op} {right}"
