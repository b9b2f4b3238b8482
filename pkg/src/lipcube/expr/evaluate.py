"""Evaluation of expression trees: scalar tree-walk and vectorized grids.

Division by zero and square roots of negative values raise EvalError with
the source offset of the offending node instead of producing NaN.  The grid
evaluator applies the same checks across every grid point, so a grid call
errors exactly when some pointwise call over the same points would.
"""

from __future__ import annotations

import math

import numpy as np

from .nodes import Binary, Const, Expr, Unary, Var, pow_exponent

DIV_BY_ZERO = "div_by_zero"
DOMAIN = "domain"


class EvalError(Exception):
    def __init__(self, kind: str, position: int, message: str):
        self.kind = kind
        self.position = position
        self.message = message
        super().__init__(f"{kind} at offset {position}: {message}")


def evaluate(e: Expr, x: float, y: float) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Unary):
        v = evaluate(e.arg, x, y)
        if e.op == "neg":
            return -v
        if e.op == "abs":
            return math.fabs(v)
        if e.op == "sin":
            return math.sin(v)
        if e.op == "cos":
            return math.cos(v)
        if e.op == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                raise EvalError(DOMAIN, e.pos, f"exp overflow at argument {v!r}")
        # sqrt
        if v < 0.0:
            raise EvalError(DOMAIN, e.pos, f"sqrt of negative value {v!r}")
        return math.sqrt(v)
    if isinstance(e, Binary):
        if e.op == "pow":
            base = evaluate(e.left, x, y)
            try:
                return base ** pow_exponent(e)
            except OverflowError:
                raise EvalError(DOMAIN, e.pos, "pow overflow")
        l = evaluate(e.left, x, y)
        r = evaluate(e.right, x, y)
        if e.op == "add":
            return l + r
        if e.op == "sub":
            return l - r
        if e.op == "mul":
            return l * r
        if e.op == "div":
            if r == 0.0:
                raise EvalError(DIV_BY_ZERO, e.pos, "division by zero")
            return l / r
        if e.op == "min":
            return min(l, r)
        return max(l, r)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate_grid(e: Expr, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate over broadcast arrays of coordinates in one pass."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = _grid(e, x, y)
    return np.broadcast_to(np.asarray(out, dtype=float), shape)


def _grid(e: Expr, x: np.ndarray, y: np.ndarray):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Unary):
        v = _grid(e.arg, x, y)
        if e.op == "neg":
            return np.negative(v)
        if e.op == "abs":
            return np.abs(v)
        if e.op == "sin":
            return np.sin(v)
        if e.op == "cos":
            return np.cos(v)
        if e.op == "exp":
            r = np.exp(v)
            if np.any(np.isinf(r)):
                raise EvalError(DOMAIN, e.pos, "exp overflow on grid")
            return r
        if np.any(np.asarray(v) < 0.0):
            raise EvalError(DOMAIN, e.pos, "sqrt of negative value on grid")
        return np.sqrt(v)
    if isinstance(e, Binary):
        if e.op == "pow":
            base = _grid(e.left, x, y)
            r = np.asarray(base) ** pow_exponent(e)
            if np.any(np.isinf(r)) and np.all(np.isfinite(base)):
                raise EvalError(DOMAIN, e.pos, "pow overflow on grid")
            return r
        l = _grid(e.left, x, y)
        r = _grid(e.right, x, y)
        if e.op == "add":
            return np.add(l, r)
        if e.op == "sub":
            return np.subtract(l, r)
        if e.op == "mul":
            return np.multiply(l, r)
        if e.op == "div":
            if np.any(np.asarray(r) == 0.0):
                raise EvalError(DIV_BY_ZERO, e.pos, "division by zero on grid")
            return np.divide(l, r)
        if e.op == "min":
            return np.minimum(l, r)
        return np.maximum(l, r)
    raise TypeError(f"not an expression node: {e!r}")
