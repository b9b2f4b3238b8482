"""Domain types and closed-form midpoint/corner error bounds.

Everything in this module is a pure function of plain floats. The bound
formulas are evaluated in one fixed, documented operation order so that
callers (and tests) can rely on bit-stable outputs.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [a, b] x [c, d]; degenerate edges are legal."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        # NaN coordinates fail these comparisons and are rejected too.
        if not (self.a <= self.b and self.c <= self.d):
            raise ValueError(
                f"rectangle requires a <= b and c <= d, got "
                f"[{self.a}, {self.b}] x [{self.c}, {self.d}]"
            )

    def width(self) -> float:
        return self.b - self.a

    def height(self) -> float:
        return self.d - self.c

    def area(self) -> float:
        return self.width() * self.height()

    def center_x(self) -> float:
        return (self.a + self.b) / 2.0

    def center_y(self) -> float:
        return (self.c + self.d) / 2.0

    def is_degenerate(self) -> bool:
        return self.width() == 0.0 or self.height() == 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class LipschitzConstants:
    """Per-coordinate Lipschitz constants.

    Two variants share one type: the pairwise form holds (L1, L2) and the
    eight-point form holds one constant per corner/axis term (L1..L8).  The
    pairwise form embeds into the eight-point one as the all-equal tuple
    (L1, L2, L1, L2, L1, L2, L1, L2).
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) not in (2, 8):
            raise ValueError("expected 2 (pairwise) or 8 constants, got "
                             f"{len(self.values)}")
        if not all(v >= 0.0 for v in self.values):
            raise ValueError(f"Lipschitz constants must be >= 0: {self.values}")

    @classmethod
    def pairwise(cls, l1: float, l2: float) -> "LipschitzConstants":
        return cls((float(l1), float(l2)))

    @classmethod
    def eight_point(cls, *ls: float) -> "LipschitzConstants":
        if len(ls) != 8:
            raise ValueError(f"eight_point takes 8 constants, got {len(ls)}")
        return cls(tuple(float(v) for v in ls))

    @property
    def is_pairwise(self) -> bool:
        return len(self.values) == 2

    def m1(self) -> float:
        v = self.values
        if len(v) == 2:
            return 4.0 * v[0]
        return v[0] + v[2] + v[4] + v[6]

    def m2(self) -> float:
        v = self.values
        if len(v) == 2:
            return 4.0 * v[1]
        return v[1] + v[3] + v[5] + v[7]

    def corner_values(self) -> tuple[float, ...]:
        """The L1..L8 view (pairwise variant expanded by embedding)."""
        v = self.values
        if len(v) == 8:
            return v
        l1, l2 = v
        return (l1, l2, l1, l2, l1, l2, l1, l2)


@dataclass(frozen=True)
class UnitPair:
    """A point (t, s) of the unit square parameter domain."""

    t: float
    s: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.t <= 1.0 and 0.0 <= self.s <= 1.0):
            raise ValueError(f"(t, s) must lie in [0,1]^2, got ({self.t}, {self.s})")


def m_constants(L: LipschitzConstants) -> tuple[float, float]:
    """Aggregated constants (M1, M2) = (L1+L3+L5+L7, L2+L4+L6+L8)."""
    return (L.m1(), L.m2())


def midpoint_mean_bound(rect: Rectangle, L: LipschitzConstants) -> float:
    """Bound on |f(center) - mean of f| for any f within the constants L."""
    return (L.m1() * rect.width() + L.m2() * rect.height()) / 16.0


def corner_mean_bound(rect: Rectangle, L: LipschitzConstants) -> float:
    """Bound on |corner average - mean of f|."""
    return (L.m1() * rect.width() + L.m2() * rect.height()) / 12.0


def corner_midpoint_bound(rect: Rectangle, L: LipschitzConstants) -> float:
    """Bound on |corner average - f(center)|."""
    return (L.m1() * rect.width() + L.m2() * rect.height()) / 8.0


def pointwise_gap_bound(ts: UnitPair, rect: Rectangle,
                        L: LipschitzConstants) -> float:
    """Bound on the gap between the bilinear corner blend and f at the
    blended point ((1-t)-weighted in x, (1-s)-weighted in y)."""
    l1, l2, l3, l4, l5, l6, l7, l8 = L.corner_values()
    t, s = ts.t, ts.s
    return (
        (t * s * (1.0 - t) * (l1 + l3) + t * (1.0 - s) * (1.0 - t) * (l5 + l7))
        * rect.width()
        + (t * s * (1.0 - s) * (l2 + l6) + s * (1.0 - s) * (1.0 - t) * (l4 + l8))
        * rect.height()
    )


def h_vs_midpoint_bound(ts: UnitPair, rect: Rectangle,
                        l1: float, l2: float) -> float:
    """Bound on |H(t, s) - f(center)| for the shrunken-mean mapping H."""
    return l1 * ts.t * rect.width() / 4.0 + l2 * ts.s * rect.height() / 4.0


def h_vs_mean_bound(ts: UnitPair, rect: Rectangle,
                    l1: float, l2: float) -> float:
    """Bound on |H(t, s) - mean of f over the full rectangle|."""
    return (l1 * (1.0 - ts.t) * rect.width() / 4.0
            + l2 * (1.0 - ts.s) * rect.height() / 4.0)


def h_lipschitz_modulus(rect: Rectangle, l1: float, l2: float) -> tuple[float, float]:
    """Moduli (mt, ms) with |H(t2,s2) - H(t1,s1)| <= mt|t2-t1| + ms|s2-s1|."""
    return (l1 * rect.width() / 4.0, l2 * rect.height() / 4.0)


def subrectangle_corner_bound(ts: UnitPair, rect: Rectangle,
                              L: LipschitzConstants) -> float:
    """Bound on |corner average over the shrunken rectangle - H(t, s)|.

    Uses the form (M1*t*width + M2*s*height)/12, i.e. the shrunken edge
    lengths t*(b-a) and s*(d-c) enter linearly.
    """
    return (L.m1() * ts.t * rect.width() + L.m2() * ts.s * rect.height()) / 12.0


def shrink_toward_center(rect: Rectangle, ts: UnitPair) -> Rectangle:
    """The rectangle scaled by (t, s) about its center.

    t = 1 returns the rectangle itself bit-for-bit; t = 0 collapses the x
    extent onto the center line (likewise s for y).
    """
    t, s = ts.t, ts.s
    mx = rect.center_x()
    my = rect.center_y()
    return Rectangle(
        rect.a * t + (1.0 - t) * mx,
        rect.b * t + (1.0 - t) * mx,
        rect.c * s + (1.0 - s) * my,
        rect.d * s + (1.0 - s) * my,
    )


def oned_midpoint_bound(width: float, L: float) -> float:
    """1-D bound on |f(midpoint) - mean| for an L-Lipschitz f."""
    return L * width / 4.0


def oned_trapezoid_bound(width: float, L: float) -> float:
    """1-D bound on |(f(a)+f(b))/2 - mean| for an L-Lipschitz f."""
    return L * width / 3.0
