"""Numerical verification of every midpoint/corner/chain inequality.

Runs the inequality checks over builtin functions and randomized families,
reporting the slack (rhs - lhs) of each instance.  Random cone functions
carry exactly-known Lipschitz constants, and their kinks are drawn on a
dyadic sub-lattice of the rectangle so the Simpson oracle integrates them
exactly; the random smooth family is bicubic polynomials, which the oracle
also integrates exactly.  That keeps oracle noise orders of magnitude below
the violation threshold.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from . import core
from ._parallel import pmap
from .core import LipschitzConstants, Rectangle, UnitPair, shrink_toward_center
from .expr import Binary, Const, Expr, Unary, Var, builtin
from .interval import certified_lipschitz
from .quad import (
    FunctionLike,
    as_function,
    corner_average,
    h_value,
    line_mean_x,
    line_mean_y,
    mean_value_oracle,
    midpoint_value,
)

# Absolute slack below which an inequality instance counts as violated.
# Backed by the oracle policy above: oracle noise stays < 1e-10.
ORACLE_SLACK_TOL = 1e-8

# Additive tolerance in the co-ordinated-convexity pointwise test.
CONVEXITY_TOL = 1e-12

# Case names whose failures gate the suite (count as violations).  The
# extra-factor variant of the subrectangle bound and the convexity
# classifier are informational.
GATING_NAMES = frozenset({
    "eq1", "eq3", "eq6", "eq7", "eq9", "eq10", "eq11",
    "chain", "1d-mid", "1d-trap",
})

_UNIT = Rectangle(0.0, 1.0, 0.0, 1.0)


class InvalidSpecError(ValueError):
    pass


@dataclass(frozen=True)
class InequalityCase:
    name: str
    function: str
    rect: tuple[float, float, float, float]
    lhs: float
    rhs: float
    slack: float
    holds: bool


def make_case(name: str, function: str, rect: Rectangle | tuple,
              lhs: float, rhs: float, tol: float = ORACLE_SLACK_TOL) -> InequalityCase:
    slack = rhs - lhs
    rect_t = rect.as_tuple() if isinstance(rect, Rectangle) else tuple(rect)
    return InequalityCase(name, function, rect_t, lhs, rhs, slack, slack >= -tol)


@dataclass(frozen=True)
class ConvexityCheck:
    holds: bool
    worst_violation: float
    witness: tuple[float, float, float, float, float, float] | None


def check_coordinated_convexity(f: FunctionLike, rect: Rectangle,
                                samples: int, seed: int) -> ConvexityCheck:
    """Sample the defining inequality of co-ordinated convexity.

    Draws (t, s, (x, y), (u, w)) with x, y along the first axis and u, w
    along the second, and tests
        f(tx+(1-t)y, su+(1-s)w) <= ts f(x,u) + s(1-t) f(y,u)
                                   + t(1-s) f(x,w) + (1-t)(1-s) f(y,w)
    up to an additive 1e-12.  Reports the worst signed violation found and
    its witness tuple.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    f = as_function(f)
    rng = random.Random(seed)
    worst = -math.inf
    witness = None
    for _ in range(samples):
        t = rng.random()
        s = rng.random()
        x = rng.uniform(rect.a, rect.b)
        y = rng.uniform(rect.a, rect.b)
        u = rng.uniform(rect.c, rect.d)
        w = rng.uniform(rect.c, rect.d)
        lhs = f(t * x + (1.0 - t) * y, s * u + (1.0 - s) * w)
        rhs = (t * s * f(x, u) + s * (1.0 - t) * f(y, u)
               + t * (1.0 - s) * f(x, w) + (1.0 - t) * (1.0 - s) * f(y, w))
        violation = lhs - rhs
        if violation > worst:
            worst = violation
            witness = (t, s, x, y, u, w)
    return ConvexityCheck(worst <= CONVEXITY_TOL, worst, witness)


def verify_hadamard_chain(f: FunctionLike, rect: Rectangle, n: int, *,
                          function: str = "f"
                          ) -> tuple[list[float], list[InequalityCase]]:
    """The five chain terms and the four adjacent inequality cases.

    The caller asserts (or has checked) that f is co-ordinated convex.
    """
    f = as_function(f)
    mid_y = rect.center_y()
    mid_x = rect.center_x()
    terms = [
        midpoint_value(f, rect),
        (line_mean_x(f, rect, mid_y, n) + line_mean_y(f, rect, mid_x, n)) / 2.0,
        mean_value_oracle(f, rect, n),
        (line_mean_x(f, rect, rect.c, n) + line_mean_x(f, rect, rect.d, n)
         + line_mean_y(f, rect, rect.a, n) + line_mean_y(f, rect, rect.b, n)) / 4.0,
        corner_average(f, rect),
    ]
    cases = [make_case("chain", function, rect, terms[i], terms[i + 1])
             for i in range(4)]
    return terms, cases


def verify_lipschitz_bounds(f: FunctionLike, L: LipschitzConstants,
                            rect: Rectangle, n: int, *,
                            function: str = "f") -> list[InequalityCase]:
    """Cases for the midpoint-vs-mean, corner-vs-midpoint and corner-vs-mean
    bounds (prefactors 1/16, 1/8, 1/12)."""
    f = as_function(f)
    mid = midpoint_value(f, rect)
    mean = mean_value_oracle(f, rect, n)
    corners = corner_average(f, rect)
    return [
        make_case("eq1", function, rect, abs(mid - mean),
                  core.midpoint_mean_bound(rect, L)),
        make_case("eq3", function, rect, abs(corners - mid),
                  core.corner_midpoint_bound(rect, L)),
        make_case("eq11", function, rect, abs(corners - mean),
                  core.corner_mean_bound(rect, L)),
    ]


def verify_h_properties(f: FunctionLike, l1: float, l2: float, rect: Rectangle,
                        grid: Sequence[UnitPair], n: int, *,
                        function: str = "f") -> list[InequalityCase]:
    """Cases for the shrunken-mean mapping H over a (t, s) grid.

    Per grid point: H vs midpoint, H vs mean, and the shrunken-rectangle
    corner bound (gating, name "eq10") together with a variant carrying
    extra t, s factors on the already-shrunken edge lengths (informational,
    "eq10-alt"; the extra factors double-count the shrink, so this variant
    can genuinely fail).  Per consecutive grid pair: the Lipschitz modulus
    of H.
    """
    f = as_function(f)
    mid = midpoint_value(f, rect)
    mean = mean_value_oracle(f, rect, n)
    mod_t, mod_s = core.h_lipschitz_modulus(rect, l1, l2)
    pair = LipschitzConstants.pairwise(l1, l2)
    h_vals = [h_value(f, rect, ts, n) for ts in grid]
    cases = []
    for ts, h in zip(grid, h_vals):
        cases.append(make_case("eq6", function, rect, abs(h - mid),
                               core.h_vs_midpoint_bound(ts, rect, l1, l2)))
        cases.append(make_case("eq7", function, rect, abs(h - mean),
                               core.h_vs_mean_bound(ts, rect, l1, l2)))
        sub = shrink_toward_center(rect, ts)
        lhs10 = abs(corner_average(f, sub) - h)
        cases.append(make_case("eq10", function, rect, lhs10,
                               core.subrectangle_corner_bound(ts, rect, pair)))
        alt = (pair.m1() * sub.width() * ts.t
               + pair.m2() * sub.height() * ts.s) / 12.0
        cases.append(make_case("eq10-alt", function, rect, lhs10, alt))
    for i in range(len(grid) - 1):
        ts1, ts2 = grid[i], grid[i + 1]
        lhs = abs(h_vals[i + 1] - h_vals[i])
        rhs = mod_t * abs(ts2.t - ts1.t) + mod_s * abs(ts2.s - ts1.s)
        cases.append(make_case("eq9", function, rect, lhs, rhs))
    return cases


def verify_1d_degenerate(f1: Callable[[float], float], L: float,
                         interval: tuple[float, float], n: int, *,
                         function: str = "f1") -> list[InequalityCase]:
    """Embed a one-variable function on a zero-height rectangle and check the
    1-D midpoint (L*width/4) and trapezoid (L*width/3) bounds."""
    a, b = interval
    rect = Rectangle(a, b, 0.0, 0.0)
    mean = mean_value_oracle(lambda x, y: f1(x), rect, n)
    mid_lhs = abs(f1((a + b) / 2.0) - mean)
    trap_lhs = abs((f1(a) + f1(b)) / 2.0 - mean)
    return [
        make_case("1d-mid", function, rect, mid_lhs,
                  core.oned_midpoint_bound(b - a, L)),
        make_case("1d-trap", function, rect, trap_lhs,
                  core.oned_trapezoid_bound(b - a, L)),
    ]


@dataclass(frozen=True)
class RandomConeSpec:
    """f(x, y) = sum_i c_i * (ax_i*|x - p_i| + ay_i*|y - q_i|).

    Co-ordinated convex by construction, with exact per-coordinate Lipschitz
    constants L1 = sum c_i*ax_i and L2 = sum c_i*ay_i.
    """

    coefficients: tuple[float, ...]
    apexes: tuple[tuple[float, float], ...]
    axis_weights: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not (len(self.coefficients) == len(self.apexes)
                == len(self.axis_weights)):
            raise InvalidSpecError("spec lists must have equal length")
        if any(c < 0.0 for c in self.coefficients):
            raise InvalidSpecError("coefficients must be >= 0")
        if any(ax < 0.0 or ay < 0.0 for ax, ay in self.axis_weights):
            raise InvalidSpecError("axis weights must be >= 0")

    @property
    def k(self) -> int:
        return len(self.coefficients)

    def exact_lipschitz(self) -> tuple[float, float]:
        l1 = 0.0
        l2 = 0.0
        for c, (ax, ay) in zip(self.coefficients, self.axis_weights):
            l1 = l1 + c * ax
            l2 = l2 + c * ay
        return (l1, l2)


# Apexes are drawn as multiples of width/32 from the left edge: every kink
# then sits bit-exactly on an even node of any Simpson grid with n a
# multiple of 64, making the oracle exact on cones.
_APEX_LATTICE = 32


def draw_cone_spec(k: int, rect: Rectangle, rng: random.Random) -> RandomConeSpec:
    coeffs = []
    apexes = []
    weights = []
    for _ in range(k):
        coeffs.append(rng.uniform(0.1, 2.0))
        weights.append((rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)))
        mi = rng.randint(0, _APEX_LATTICE)
        mj = rng.randint(0, _APEX_LATTICE)
        apexes.append((rect.a + (rect.width() * mi) / _APEX_LATTICE,
                       rect.c + (rect.height() * mj) / _APEX_LATTICE))
    return RandomConeSpec(tuple(coeffs), tuple(apexes), tuple(weights))


def random_cone(spec: RandomConeSpec | None = None, seed: int = 0, *,
                k: int = 3, rect: Rectangle = _UNIT
                ) -> tuple[Expr, float, float]:
    """Build the cone expression and its exact constants.

    With spec=None a spec is drawn deterministically from the seed.
    """
    if spec is None:
        spec = draw_cone_spec(k, rect, random.Random(seed))
    terms = []
    for c, (px, py), (ax, ay) in zip(spec.coefficients, spec.apexes,
                                     spec.axis_weights):
        x_part = Binary("mul", Const(ax),
                        Unary("abs", Binary("sub", Var("x"), Const(px))))
        y_part = Binary("mul", Const(ay),
                        Unary("abs", Binary("sub", Var("y"), Const(py))))
        terms.append(Binary("mul", Const(c), Binary("add", x_part, y_part)))
    if not terms:
        expr: Expr = Const(0.0)
    else:
        expr = terms[0]
        for term in terms[1:]:
            expr = Binary("add", expr, term)
    l1, l2 = spec.exact_lipschitz()
    return expr, l1, l2


def random_bicubic(seed: int, scale: float = 1.0) -> Expr:
    """Random polynomial with per-axis degree <= 3 (Simpson-exact)."""
    rng = random.Random(seed)
    expr: Expr | None = None
    for i in range(4):
        for j in range(4):
            coeff = rng.uniform(-scale, scale)
            factors: list[Expr] = [Const(coeff)]
            if i > 0:
                factors.append(Var("x") if i == 1
                               else Binary("pow", Var("x"), Const(float(i))))
            if j > 0:
                factors.append(Var("y") if j == 1
                               else Binary("pow", Var("y"), Const(float(j))))
            term = factors[0]
            for fac in factors[1:]:
                term = Binary("mul", term, fac)
            expr = term if expr is None else Binary("add", expr, term)
    assert expr is not None
    return expr


def unit_grid(k: int) -> list[UnitPair]:
    """A k x k grid of (t, s) values, dyadic for power-of-two-plus-one k."""
    if k < 1:
        raise ValueError("grid size must be >= 1")
    vals = [i / (k - 1) for i in range(k)] if k > 1 else [0.0]
    return [UnitPair(t, s) for t in vals for s in vals]


def draw_rect(rng: random.Random) -> Rectangle:
    """Random rectangle with width, height log-uniform in [0.1, 10]."""
    w = 10.0 ** rng.uniform(-1.0, 1.0)
    h = 10.0 ** rng.uniform(-1.0, 1.0)
    a = rng.uniform(-3.0, 3.0)
    c = rng.uniform(-3.0, 3.0)
    return Rectangle(a, a + w, c, c + h)


def one_d_cone(terms: Sequence[tuple[float, float]]) -> Callable[[float], float]:
    """f1(x) = sum_i c_i |x - p_i| with exact Lipschitz constant sum c_i."""
    def f1(x: float) -> float:
        total = 0.0
        for c, p in terms:
            total = total + c * abs(x - p)
        return total
    return f1


@dataclass(frozen=True)
class Report:
    seed: int
    cases: tuple[InequalityCase, ...]
    violations: int

    def to_json(self) -> str:
        obj = {
            "seed": self.seed,
            "cases": [
                {
                    "name": c.name,
                    "function": c.function,
                    "rect": list(c.rect),
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                    "slack": c.slack,
                    "holds": c.holds,
                }
                for c in self.cases
            ],
            "violations": self.violations,
        }
        return json.dumps(obj)

    def to_csv(self) -> str:
        lines = ["name,function,a,b,c,d,lhs,rhs,slack,holds"]
        for c in self.cases:
            ra, rb, rc, rd = c.rect
            lines.append(
                f"{c.name},{c.function},{ra!r},{rb!r},{rc!r},{rd!r},"
                f"{c.lhs!r},{c.rhs!r},{c.slack!r},"
                f"{'true' if c.holds else 'false'}"
            )
        return "\n".join(lines) + "\n"


def build_report(seed: int, cases: Sequence[InequalityCase]) -> Report:
    violations = sum(1 for c in cases
                     if c.name in GATING_NAMES and not c.holds)
    return Report(seed, tuple(cases), violations)


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    oracle_n: int = 64          # cones and polynomials: Simpson is exact here
    smooth_oracle_n: int = 256  # trig builtins
    lipschitz_trials: int = 40
    chain_trials: int = 20
    h_functions: int = 6
    h_grid: int = 5
    oned_trials: int = 25
    convexity_samples: int = 4000
    convexity_functions: tuple[str, ...] = (
        "linear", "cone", "prodconvex", "sincos", "wiggle")


_SMOOTH_BUILTINS = frozenset({"sincos", "wiggle"})
_CONVEX_BUILTINS = ("linear", "cone", "prodconvex")


def run_suite(config: VerifyConfig = VerifyConfig()) -> Report:
    """Run every check over builtins plus randomized families.

    Cases are assembled in a fixed declaration order and every random draw
    happens before the (optionally parallel) evaluation, so reports are
    byte-identical for a given config regardless of HC_THREADS.
    """
    rng = random.Random(config.seed)
    tasks: list[Callable[[], list[InequalityCase]]] = []

    # -- co-ordinated convexity classifier (informational) ------------------
    for name in config.convexity_functions:
        child_seed = rng.randrange(2 ** 32)
        def conv_task(name=name, child_seed=child_seed):
            check = check_coordinated_convexity(
                builtin(name), _UNIT, config.convexity_samples, child_seed)
            return [make_case("convexity", name, _UNIT,
                              check.worst_violation, CONVEXITY_TOL, tol=0.0)]
        tasks.append(conv_task)

    # -- midpoint/corner bounds: builtins with certified constants ----------
    for name in ("linear", "cone", "prodconvex", "sincos", "wiggle"):
        n = config.smooth_oracle_n if name in _SMOOTH_BUILTINS else config.oracle_n
        def lip_builtin_task(name=name, n=n):
            e = builtin(name)
            l1, l2 = certified_lipschitz(e, _UNIT, 16)
            return verify_lipschitz_bounds(
                e, LipschitzConstants.pairwise(l1, l2), _UNIT, n, function=name)
        tasks.append(lip_builtin_task)

    # -- midpoint/corner bounds: random cones with exact constants ----------
    for i in range(config.lipschitz_trials):
        rect = draw_rect(rng)
        spec = draw_cone_spec(rng.randint(1, 3), rect, rng)
        def lip_cone_task(rect=rect, spec=spec, i=i):
            e, l1, l2 = random_cone(spec)
            return verify_lipschitz_bounds(
                e, LipschitzConstants.pairwise(l1, l2), rect, config.oracle_n,
                function=f"random-cone-{i:03d}")
        tasks.append(lip_cone_task)

    # -- Hadamard chain on co-ordinated convex functions ---------------------
    for name in _CONVEX_BUILTINS:
        def chain_builtin_task(name=name):
            _, cases = verify_hadamard_chain(
                builtin(name), _UNIT, config.oracle_n, function=name)
            return cases
        tasks.append(chain_builtin_task)
    for i in range(config.chain_trials):
        rect = draw_rect(rng)
        spec = draw_cone_spec(rng.randint(1, 3), rect, rng)
        def chain_cone_task(rect=rect, spec=spec, i=i):
            e, _, _ = random_cone(spec)
            _, cases = verify_hadamard_chain(
                e, rect, config.oracle_n, function=f"random-cone-chain-{i:03d}")
            return cases
        tasks.append(chain_cone_task)

    # -- mapping H properties ------------------------------------------------
    grid = unit_grid(config.h_grid)
    for name in _CONVEX_BUILTINS:
        def h_builtin_task(name=name):
            e = builtin(name)
            l1, l2 = certified_lipschitz(e, _UNIT, 16)
            return verify_h_properties(e, l1, l2, _UNIT, grid, config.oracle_n,
                                       function=name)
        tasks.append(h_builtin_task)
    for i in range(config.h_functions):
        rect = draw_rect(rng)
        poly_seed = rng.randrange(2 ** 32)
        def h_poly_task(rect=rect, poly_seed=poly_seed, i=i):
            e = random_bicubic(poly_seed)
            l1, l2 = certified_lipschitz(e, rect, 8)
            return verify_h_properties(e, l1, l2, rect, grid, config.oracle_n,
                                       function=f"random-poly-{i:03d}")
        tasks.append(h_poly_task)

    # -- 1-D degenerate checks ------------------------------------------------
    def oned_fixed_task():
        tight = verify_1d_degenerate(lambda x: abs(x - 0.5), 1.0, (0.0, 1.0),
                                     config.oracle_n, function="abs(x-0.5)")
        flat = verify_1d_degenerate(lambda x: 3.0, 0.0, (0.0, 1.0),
                                    config.oracle_n, function="const-3")
        return tight + flat
    tasks.append(oned_fixed_task)
    for i in range(config.oned_trials):
        a = rng.uniform(-3.0, 3.0)
        w = 10.0 ** rng.uniform(-1.0, 1.0)
        k = rng.randint(1, 3)
        terms = tuple(
            (rng.uniform(0.1, 2.0),
             a + (w * rng.randint(0, _APEX_LATTICE)) / _APEX_LATTICE)
            for _ in range(k)
        )
        def oned_task(a=a, w=w, terms=terms, i=i):
            f1 = one_d_cone(terms)
            l_exact = 0.0
            for c, _ in terms:
                l_exact = l_exact + c
            return verify_1d_degenerate(f1, l_exact, (a, a + w), config.oracle_n,
                                        function=f"random-1d-{i:03d}")
        tasks.append(oned_task)

    results = pmap(lambda task: task(), tasks)
    cases: list[InequalityCase] = [case for group in results for case in group]

    # Observed tightness of the corner-vs-mean prefactor, reported but never
    # asserted (no extremal family is known for it).
    ratios = [c.lhs / c.rhs for c in cases if c.name == "eq11" and c.rhs > 0.0]
    if ratios:
        cases.append(make_case("eq11-ratio", "summary",
                               (0.0, 0.0, 0.0, 0.0), max(ratios), 1.0))

    return build_report(config.seed, cases)
