"""Point and mean evaluations compared by the inequality checks.

The reference mean is a tensor-product composite Simpson rule.  It is an
oracle, not a certified value: callers pick the resolution n so that the
self-consistency gap |oracle(n) - oracle(2n)| is far below the tolerance
they assert.  Grid sums run in row-major order through exactly-rounded
compensated summation, so results are bit-deterministic.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Union

import numpy as np

from .core import Rectangle, UnitPair, shrink_toward_center
from .expr import Binary, Const, Expr, Unary, Var, evaluate, evaluate_grid

Function2D = Callable[[float, float], float]
FunctionLike = Union[Function2D, Expr]


class ExprFunction:
    """Expose an expression tree as f(x, y) with a vectorized grid path."""

    __slots__ = ("expr", "label")

    def __init__(self, expr: Expr, label: str | None = None):
        self.expr = expr
        self.label = label

    def __call__(self, x: float, y: float) -> float:
        return evaluate(self.expr, x, y)

    def eval_grid(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return evaluate_grid(self.expr, x, y)


def as_function(f: FunctionLike) -> Function2D:
    if isinstance(f, (Const, Var, Unary, Binary)):
        return ExprFunction(f)
    return f


def compensated_sum(values: Iterable[float]) -> float:
    """Exactly-rounded sum; order-insensitive result, fed in row-major order."""
    return math.fsum(values)


def _check_even(n: int) -> None:
    if n < 2 or n % 2 != 0:
        raise ValueError(f"oracle resolution must be an even integer >= 2, got {n}")


def _nodes(lo: float, hi: float, n: int) -> list[float]:
    w = hi - lo
    pts = [lo + (w * i) / n for i in range(n + 1)]
    pts[-1] = hi
    return pts


def _weights(n: int) -> list[int]:
    ws = [4 if i % 2 == 1 else 2 for i in range(n + 1)]
    ws[0] = 1
    ws[-1] = 1
    return ws


def midpoint_value(f: FunctionLike, rect: Rectangle) -> float:
    f = as_function(f)
    return f(rect.center_x(), rect.center_y())


def corner_average(f: FunctionLike, rect: Rectangle) -> float:
    f = as_function(f)
    return (f(rect.a, rect.c) + f(rect.a, rect.d)
            + f(rect.b, rect.c) + f(rect.b, rect.d)) / 4.0


def line_mean_x(f: FunctionLike, rect: Rectangle, y0: float, n: int) -> float:
    """Composite-Simpson mean of f(., y0) along [a, b]."""
    _check_even(n)
    f = as_function(f)
    if rect.width() == 0.0:
        return f(rect.a, y0)
    xs = _nodes(rect.a, rect.b, n)
    ws = _weights(n)
    if hasattr(f, "eval_grid"):
        vals = f.eval_grid(np.asarray(xs), np.float64(y0))
        terms = [w * v for w, v in zip(ws, vals.tolist())]
    else:
        terms = [w * f(xv, y0) for w, xv in zip(ws, xs)]
    return compensated_sum(terms) / (3.0 * n)


def line_mean_y(f: FunctionLike, rect: Rectangle, x0: float, n: int) -> float:
    """Composite-Simpson mean of f(x0, .) along [c, d]."""
    _check_even(n)
    f = as_function(f)
    if rect.height() == 0.0:
        return f(x0, rect.c)
    ys = _nodes(rect.c, rect.d, n)
    ws = _weights(n)
    if hasattr(f, "eval_grid"):
        vals = f.eval_grid(np.float64(x0), np.asarray(ys))
        terms = [w * v for w, v in zip(ws, vals.tolist())]
    else:
        terms = [w * f(x0, yv) for w, yv in zip(ws, ys)]
    return compensated_sum(terms) / (3.0 * n)


def mean_value_oracle(f: FunctionLike, rect: Rectangle, n: int) -> float:
    """Mean of f over the rectangle on an (n+1) x (n+1) Simpson grid.

    Degenerate axes reduce to a 1-D Simpson mean or a point evaluation, so
    zero-width normalization never occurs.
    """
    _check_even(n)
    f = as_function(f)
    w, h = rect.width(), rect.height()
    if w == 0.0 and h == 0.0:
        return f(rect.a, rect.c)
    if w == 0.0:
        return line_mean_y(f, rect, rect.a, n)
    if h == 0.0:
        return line_mean_x(f, rect, rect.c, n)
    xs = _nodes(rect.a, rect.b, n)
    ys = _nodes(rect.c, rect.d, n)
    wx = _weights(n)
    wy = _weights(n)
    if hasattr(f, "eval_grid"):
        grid = f.eval_grid(np.asarray(xs)[:, None], np.asarray(ys)[None, :])
        weighted = np.outer(wx, wy) * grid
        total = compensated_sum(weighted.ravel(order="C").tolist())
    else:
        total = compensated_sum(
            (wx[i] * wy[j]) * f(xs[i], ys[j])
            for i in range(n + 1) for j in range(n + 1)
        )
    return total / (9.0 * n * n)


def h_value(f: FunctionLike, rect: Rectangle, ts: UnitPair, n: int) -> float:
    """Mean of f over the rectangle shrunk by (t, s) about its center.

    H(0, 0) is exactly the midpoint value and H(1, 1) exactly the full mean,
    because the shrunken rectangle is then bit-identical to the degenerate
    center point / the original rectangle.
    """
    return mean_value_oracle(f, shrink_toward_center(rect, ts), n)
