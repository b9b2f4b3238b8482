"""Interval arithmetic with forward derivative propagation.

Certifies per-coordinate Lipschitz constants L1 = sup|df/dx|, L2 = sup|df/dy|
over a rectangle by evaluating the expression on subboxes with interval
coefficients.  Directed rounding is approximated by widening every inexact
operation result one unit-in-the-last-place outward on each endpoint, so all
enclosures are certified up to that 1-ulp-per-operation inflation.

Non-smooth primitives get Clarke-style derivative hulls: abs contributes
sign(u)*u' when the argument enclosure excludes zero and the symmetric hull
[-|u'|, +|u'|] otherwise; min/max contribute the active branch's derivative
when the value enclosures separate and the hull of both otherwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._parallel import pmap
from .core import Rectangle
from .expr import Binary, Const, Expr, Unary, Var, pow_exponent


class SingularityInDomain(Exception):
    """Division by an interval containing 0, or sqrt over negative values."""

    def __init__(self, message: str, position: int = -1):
        self.position = position
        super().__init__(message)


class UnboundedDerivative(Exception):
    """A derivative enclosure has an infinite endpoint over the box."""


_INF = math.inf


def _down(v: float) -> float:
    return math.nextafter(v, -_INF)


def _up(v: float) -> float:
    return math.nextafter(v, _INF)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        # NaN endpoints fail the comparison and are rejected.
        if not (self.lo <= self.hi):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    def magnitude(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi


ZERO = Interval(0.0, 0.0)
ONE = Interval(1.0, 1.0)


def _make(lo: float, hi: float) -> Interval:
    # Infinite arithmetic can leave NaN (e.g. inf/inf); resolve outward.
    if math.isnan(lo):
        lo = -_INF
    if math.isnan(hi):
        hi = _INF
    return Interval(lo, hi)


def _prod(x: float, y: float) -> float:
    # 0 * inf is 0 here: every attained product with a zero factor is zero.
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def iadd(a: Interval, b: Interval) -> Interval:
    return _make(_down(a.lo + b.lo), _up(a.hi + b.hi))


def isub(a: Interval, b: Interval) -> Interval:
    return _make(_down(a.lo - b.hi), _up(a.hi - b.lo))


def ineg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def imul(a: Interval, b: Interval) -> Interval:
    ps = (_prod(a.lo, b.lo), _prod(a.lo, b.hi),
          _prod(a.hi, b.lo), _prod(a.hi, b.hi))
    return _make(_down(min(ps)), _up(max(ps)))


def idiv(a: Interval, b: Interval) -> Interval:
    if b.contains_zero():
        raise SingularityInDomain(
            f"division by interval [{b.lo}, {b.hi}] containing 0")
    qs = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
    return _make(_down(min(qs)), _up(max(qs)))


def _fpow(x: float, n: int) -> float:
    try:
        return x ** n
    except OverflowError:
        return _INF if (x > 0.0 or n % 2 == 0) else -_INF


def ipow(a: Interval, n: int) -> Interval:
    if n < 0 or n != int(n):
        raise ValueError("pow exponent must be a nonnegative integer")
    if n == 0:
        return ONE
    if n == 1:
        return a
    if n % 2 == 1 or a.lo >= 0.0:
        return _make(_down(_fpow(a.lo, n)), _up(_fpow(a.hi, n)))
    if a.hi <= 0.0:
        return _make(_down(_fpow(a.hi, n)), _up(_fpow(a.lo, n)))
    return _make(0.0, _up(max(_fpow(a.lo, n), _fpow(a.hi, n))))


def iabs(a: Interval) -> Interval:
    if a.lo >= 0.0:
        return a
    if a.hi <= 0.0:
        return ineg(a)
    return Interval(0.0, max(-a.lo, a.hi))


def imin(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def imax(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi))


def ihull(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


def iexp(a: Interval) -> Interval:
    def _e(v: float) -> float:
        try:
            return math.exp(v)
        except OverflowError:
            return _INF
    return _make(max(0.0, _down(_e(a.lo))), _up(_e(a.hi)))


def isqrt(a: Interval) -> Interval:
    if a.lo < 0.0:
        raise SingularityInDomain(
            f"sqrt over interval [{a.lo}, {a.hi}] with negative values")
    return _make(max(0.0, _down(math.sqrt(a.lo))), _up(math.sqrt(a.hi)))


_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


def _has_critical(a: Interval, offset: float) -> bool:
    # Does offset + 2*pi*k fall in [lo, hi] for some integer k?  Conservative:
    # points within a small relative slack of the endpoints count as inside.
    slack = 1e-9 * max(1.0, abs(a.lo), abs(a.hi))
    k0 = math.floor((a.lo - offset) / _TWO_PI) - 1
    for k in range(k0, k0 + 4):
        p = offset + _TWO_PI * k
        if a.lo - slack <= p <= a.hi + slack:
            return True
    return False


def _trig_range(a: Interval, fn: Callable[[float], float],
                max_offset: float, min_offset: float) -> Interval:
    if math.isinf(a.lo) or math.isinf(a.hi) or a.hi - a.lo >= _TWO_PI:
        return Interval(-1.0, 1.0)
    f_lo, f_hi = fn(a.lo), fn(a.hi)
    hi = 1.0 if _has_critical(a, max_offset) else min(1.0, _up(max(f_lo, f_hi)))
    lo = -1.0 if _has_critical(a, min_offset) else max(-1.0, _down(min(f_lo, f_hi)))
    return Interval(lo, hi)


def isin(a: Interval) -> Interval:
    return _trig_range(a, math.sin, _HALF_PI, -_HALF_PI)


def icos(a: Interval) -> Interval:
    return _trig_range(a, math.cos, 0.0, math.pi)


_OPS: dict[str, Callable[..., Interval]] = {
    "add": iadd, "sub": isub, "neg": ineg, "mul": imul, "div": idiv,
    "pow": ipow, "abs": iabs, "min": imin, "max": imax, "hull": ihull,
    "exp": iexp, "sqrt": isqrt, "sin": isin, "cos": icos,
}


def ia_apply(op: str, *args) -> Interval:
    """Apply one named interval operation (pow takes an integer exponent)."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown interval operation {op!r}") from None
    return fn(*args)


@dataclass(frozen=True)
class DerivBound:
    """Enclosures of f, df/dx and df/dy over a box."""

    value: Interval
    dx: Interval
    dy: Interval


def _abs_deriv(value: Interval, d: Interval) -> Interval:
    if value.lo > 0.0:
        return d
    if value.hi < 0.0:
        return ineg(d)
    m = d.magnitude()
    return Interval(-m, m)


def _sqrt_chain(value: Interval) -> Interval:
    # Enclosure of 1/(2*sqrt(u)) over u; unbounded as the argument reaches 0.
    if value.lo > 0.0:
        return _make(_down(1.0 / (2.0 * math.sqrt(value.hi))),
                     _up(1.0 / (2.0 * math.sqrt(value.lo))))
    if value.hi > 0.0:
        return _make(_down(1.0 / (2.0 * math.sqrt(value.hi))), _INF)
    return Interval(-_INF, _INF)


def _forward(e: Expr, x: Interval, y: Interval) -> DerivBound:
    if isinstance(e, Const):
        return DerivBound(Interval(e.value, e.value), ZERO, ZERO)
    if isinstance(e, Var):
        if e.name == "x":
            return DerivBound(x, ONE, ZERO)
        return DerivBound(y, ZERO, ONE)
    if isinstance(e, Unary):
        u = _forward(e.arg, x, y)
        if e.op == "neg":
            return DerivBound(ineg(u.value), ineg(u.dx), ineg(u.dy))
        if e.op == "abs":
            return DerivBound(iabs(u.value),
                              _abs_deriv(u.value, u.dx),
                              _abs_deriv(u.value, u.dy))
        if e.op == "sin":
            chain = icos(u.value)
            return DerivBound(isin(u.value), imul(chain, u.dx), imul(chain, u.dy))
        if e.op == "cos":
            chain = ineg(isin(u.value))
            return DerivBound(icos(u.value), imul(chain, u.dx), imul(chain, u.dy))
        if e.op == "exp":
            v = iexp(u.value)
            return DerivBound(v, imul(v, u.dx), imul(v, u.dy))
        # sqrt
        if u.value.lo < 0.0:
            raise SingularityInDomain(
                "sqrt over an interval with negative values", e.pos)
        chain = _sqrt_chain(u.value)
        return DerivBound(isqrt(u.value), imul(chain, u.dx), imul(chain, u.dy))
    if isinstance(e, Binary):
        if e.op == "pow":
            n = pow_exponent(e)
            u = _forward(e.left, x, y)
            if n == 0:
                return DerivBound(ONE, ZERO, ZERO)
            nn = Interval(float(n), float(n))
            chain = imul(nn, ipow(u.value, n - 1))
            return DerivBound(ipow(u.value, n),
                              imul(chain, u.dx), imul(chain, u.dy))
        u = _forward(e.left, x, y)
        w = _forward(e.right, x, y)
        if e.op == "add":
            return DerivBound(iadd(u.value, w.value),
                              iadd(u.dx, w.dx), iadd(u.dy, w.dy))
        if e.op == "sub":
            return DerivBound(isub(u.value, w.value),
                              isub(u.dx, w.dx), isub(u.dy, w.dy))
        if e.op == "mul":
            return DerivBound(
                imul(u.value, w.value),
                iadd(imul(u.dx, w.value), imul(u.value, w.dx)),
                iadd(imul(u.dy, w.value), imul(u.value, w.dy)),
            )
        if e.op == "div":
            if w.value.contains_zero():
                raise SingularityInDomain(
                    f"division by interval [{w.value.lo}, {w.value.hi}] "
                    "containing 0", e.pos)
            den = imul(w.value, w.value)
            return DerivBound(
                idiv(u.value, w.value),
                idiv(isub(imul(u.dx, w.value), imul(u.value, w.dx)), den),
                idiv(isub(imul(u.dy, w.value), imul(u.value, w.dy)), den),
            )
        # min / max: hull the branch derivatives unless one branch dominates
        pick = imin if e.op == "min" else imax
        value = pick(u.value, w.value)
        if e.op == "min":
            u_active = u.value.hi < w.value.lo
            w_active = w.value.hi < u.value.lo
        else:
            u_active = u.value.lo > w.value.hi
            w_active = w.value.lo > u.value.hi
        if u_active:
            return DerivBound(value, u.dx, u.dy)
        if w_active:
            return DerivBound(value, w.dx, w.dy)
        return DerivBound(value, ihull(u.dx, w.dx), ihull(u.dy, w.dy))
    raise TypeError(f"not an expression node: {e!r}")


def eval_with_derivatives(e: Expr, x: Interval, y: Interval) -> DerivBound:
    """Forward-mode interval propagation of (value, df/dx, df/dy) over a box."""
    db = _forward(e, x, y)
    for d, name in ((db.dx, "df/dx"), (db.dy, "df/dy")):
        if math.isinf(d.lo) or math.isinf(d.hi):
            raise UnboundedDerivative(
                f"{name} enclosure [{d.lo}, {d.hi}] has an infinite endpoint")
    return db


def _edges(lo: float, hi: float, k: int) -> list[float]:
    # Power-of-two refinements of this partition nest bit-for-bit, which makes
    # certified constants monotone under subdivision doubling.
    w = hi - lo
    pts = [lo + (w * i) / k for i in range(k + 1)]
    pts[0] = lo
    pts[-1] = hi
    for i in range(1, k + 1):
        if pts[i] < pts[i - 1]:
            pts[i] = pts[i - 1]
    return pts


def certified_lipschitz(e: Expr, rect: Rectangle,
                        subdivisions: int = 16) -> tuple[float, float]:
    """True upper bounds (L1, L2) on the per-coordinate Lipschitz constants.

    Partitions the rectangle into subdivisions x subdivisions boxes and takes
    the worst derivative-enclosure magnitude per axis.
    """
    if subdivisions < 1:
        raise ValueError("subdivisions must be >= 1")
    xs = _edges(rect.a, rect.b, subdivisions)
    ys = _edges(rect.c, rect.d, subdivisions)
    boxes = [
        (Interval(xs[i], xs[i + 1]), Interval(ys[j], ys[j + 1]))
        for i in range(subdivisions)
        for j in range(subdivisions)
    ]
    results = pmap(lambda box: eval_with_derivatives(e, box[0], box[1]), boxes)
    l1 = max(db.dx.magnitude() for db in results)
    l2 = max(db.dy.magnitude() for db in results)
    return (l1, l2)


def sampled_lipschitz(f, rect: Rectangle, samples: int = 10000, seed: int = 0,
                      rel_step: float = 1e-6) -> tuple[float, float]:
    """UNCERTIFIED lower-bound estimate of (L1, L2) from central differences
    at random points.  A true constant can only be larger."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    w, h = rect.width(), rect.height()
    pts_x = np.array([rng.uniform(rect.a, rect.b) for _ in range(samples)])
    pts_y = np.array([rng.uniform(rect.c, rect.d) for _ in range(samples)])

    def slope(axis: str) -> float:
        span = w if axis == "x" else h
        if span == 0.0:
            return 0.0
        step = rel_step * span
        if axis == "x":
            base = np.clip(pts_x, rect.a + step, rect.b - step)
            hi_x, lo_x, hi_y, lo_y = base + step, base - step, pts_y, pts_y
        else:
            base = np.clip(pts_y, rect.c + step, rect.d - step)
            hi_x, lo_x, hi_y, lo_y = pts_x, pts_x, base + step, base - step
        if hasattr(f, "eval_grid"):
            upper = f.eval_grid(hi_x, hi_y)
            lower = f.eval_grid(lo_x, lo_y)
        else:
            upper = np.array([f(px, py) for px, py in zip(hi_x, hi_y)])
            lower = np.array([f(px, py) for px, py in zip(lo_x, lo_y)])
        return float(np.max(np.abs(upper - lower) / (2.0 * step)))

    return (slope("x"), slope("y"))
