"""Adaptive certified cubature.

Each cell carries the closed-form midpoint or corner error bound for its
rectangle, so the sum of area-weighted cell bounds is a rigorous bound on
|estimate - integral| whenever the supplied Lipschitz constants are true
bounds for the integrand.  Refinement is worst-first by area x bound, with
ties broken by cell creation order; the whole procedure is deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import core
from .core import LipschitzConstants, Rectangle
from .quad import FunctionLike, as_function, compensated_sum

RULES = ("midpoint", "corner")

DEFAULT_MAX_CELLS = 65536


class InvalidToleranceError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    rect: Rectangle
    estimate: float  # rule value (mean estimate over the cell, not scaled)
    bound: float     # closed-form bound on |estimate - cell mean|
    index: int       # creation counter; refinement tie-break and sum order


@dataclass(frozen=True)
class CertifiedResult:
    estimate: float
    error_bound: float
    cells: int
    evaluations: int
    converged: bool


class _Evaluator:
    """Counts integrand evaluations; memoizes corner points across cells.

    Bisection children reuse parent coordinates verbatim, so exact coordinate
    pairs are safe cache keys.
    """

    def __init__(self, f, rule: str):
        self.f = f
        self.rule = rule
        self.count = 0
        self.cache: dict[tuple[float, float], float] = {}

    def _point(self, x: float, y: float) -> float:
        key = (x, y)
        try:
            return self.cache[key]
        except KeyError:
            self.count += 1
            value = self.f(x, y)
            self.cache[key] = value
            return value

    def rule_value(self, rect: Rectangle) -> float:
        if self.rule == "midpoint":
            self.count += 1
            return self.f(rect.center_x(), rect.center_y())
        return (self._point(rect.a, rect.c) + self._point(rect.a, rect.d)
                + self._point(rect.b, rect.c) + self._point(rect.b, rect.d)) / 4.0


def integrate_certified(f: FunctionLike, rect: Rectangle, L: LipschitzConstants,
                        tol: float, rule: str = "midpoint",
                        max_cells: int = DEFAULT_MAX_CELLS) -> CertifiedResult:
    """Integrate f over rect with a rigorous error bound.

    Splits the worst cell (largest area x bound) along the axis with the
    larger of M1 x width / M2 x height until the total bound reaches tol or
    max_cells cells exist.  If L is a true Lipschitz bound for f on rect,
    |estimate - integral| <= error_bound holds unconditionally.
    """
    if not (tol > 0.0):
        raise InvalidToleranceError(f"tolerance must be > 0, got {tol}")
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    if max_cells < 1:
        raise ValueError(f"max_cells must be >= 1, got {max_cells}")
    if rect.is_degenerate():
        raise ValueError("integration rectangle must have positive area")

    bound_of = (core.midpoint_mean_bound if rule == "midpoint"
                else core.corner_mean_bound)
    evaluator = _Evaluator(as_function(f), rule)
    m1, m2 = L.m1(), L.m2()

    counter = 0

    def new_cell(r: Rectangle) -> Cell:
        nonlocal counter
        cell = Cell(r, evaluator.rule_value(r), bound_of(r, L), counter)
        counter += 1
        return cell

    def priority(cell: Cell) -> float:
        return cell.rect.area() * cell.bound

    root = new_cell(rect)
    heap = [(-priority(root), root.index, root)]
    total_bound = priority(root)
    leaves = 1

    while total_bound > tol and leaves < max_cells:
        neg_pri, _, cell = heapq.heappop(heap)
        if -neg_pri <= 0.0:
            heapq.heappush(heap, (neg_pri, cell.index, cell))
            break
        r = cell.rect
        if m1 * r.width() >= m2 * r.height():
            mid = (r.a + r.b) / 2.0
            first = Rectangle(r.a, mid, r.c, r.d)
            second = Rectangle(mid, r.b, r.c, r.d)
        else:
            mid = (r.c + r.d) / 2.0
            first = Rectangle(r.a, r.b, r.c, mid)
            second = Rectangle(r.a, r.b, mid, r.d)
        for child_rect in (first, second):
            child = new_cell(child_rect)
            heapq.heappush(heap, (-priority(child), child.index, child))
            total_bound += priority(child)
        total_bound -= -neg_pri
        leaves += 1

    cells = sorted((entry[2] for entry in heap), key=lambda cell: cell.index)
    estimate = compensated_sum(c.rect.area() * c.estimate for c in cells)
    error_bound = compensated_sum(c.rect.area() * c.bound for c in cells)
    return CertifiedResult(
        estimate=estimate,
        error_bound=error_bound,
        cells=len(cells),
        evaluations=evaluator.count,
        converged=error_bound <= tol,
    )


def uniform_grid_bound(rect: Rectangle, L: LipschitzConstants, k: int,
                       rule: str = "midpoint") -> float:
    """Exact total error bound of a uniform k x k refinement."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    denominator = 16.0 if rule == "midpoint" else 12.0
    return rect.area() * (L.m1() * rect.width() / k
                          + L.m2() * rect.height() / k) / denominator
