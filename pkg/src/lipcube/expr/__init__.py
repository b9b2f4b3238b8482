"""Bivariate expression language: AST, parser, evaluation, builtins."""

from .catalog import UnknownBuiltin, builtin, builtin_names, builtin_source
from .evaluate import DIV_BY_ZERO, DOMAIN, EvalError, evaluate, evaluate_grid
from .nodes import (
    BINARY_OPS,
    UNARY_OPS,
    Binary,
    Const,
    Expr,
    Unary,
    Var,
    pow_exponent,
    to_source,
)
from .parser import ParseError, parse

__all__ = [
    "BINARY_OPS",
    "UNARY_OPS",
    "Binary",
    "Const",
    "DIV_BY_ZERO",
    "DOMAIN",
    "EvalError",
    "Expr",
    "ParseError",
    "Unary",
    "UnknownBuiltin",
    "Var",
    "builtin",
    "builtin_names",
    "builtin_source",
    "evaluate",
    "evaluate_grid",
    "parse",
    "pow_exponent",
    "to_source",
]
