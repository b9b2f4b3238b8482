"""Simpson oracle, line means, and the shrunken-mean mapping."""

import pytest

from lipcube.core import Rectangle, UnitPair, shrink_toward_center
from lipcube.expr import builtin, parse
from lipcube.quad import (
    ExprFunction,
    compensated_sum,
    corner_average,
    h_value,
    line_mean_x,
    line_mean_y,
    mean_value_oracle,
    midpoint_value,
)

UNIT = Rectangle(0.0, 1.0, 0.0, 1.0)


def test_midpoint_value_examples():
    assert midpoint_value(builtin("linear"), UNIT) == 1.0
    assert midpoint_value(builtin("cone"), UNIT) == 0.0
    point = Rectangle(0.3, 0.3, 0.7, 0.7)
    assert midpoint_value(builtin("linear"), point) == 1.0
    assert midpoint_value(lambda x, y: x * 10 + y, point) == 3.7


def test_corner_average_examples():
    assert corner_average(builtin("linear"), UNIT) == 1.0
    assert corner_average(builtin("cone"), UNIT) == 1.0
    assert corner_average(lambda x, y: 7.0, UNIT) == 7.0


def test_oracle_exact_on_linear():
    assert mean_value_oracle(builtin("linear"), UNIT, 2) == 1.0


def test_oracle_cone_analytic():
    # the mean of |x-1/2|+|y-1/2| is 1/4 + 1/4 = 1/2 (two triangle areas)
    v256 = mean_value_oracle(builtin("cone"), UNIT, 256)
    assert abs(v256 - 0.5) < 1e-6
    v512 = mean_value_oracle(builtin("cone"), UNIT, 512)
    assert abs(v512 - v256) < 1e-12  # kink sits on grid nodes: exact


def test_oracle_rejects_odd_n():
    with pytest.raises(ValueError):
        mean_value_oracle(builtin("linear"), UNIT, 3)
    with pytest.raises(ValueError):
        mean_value_oracle(builtin("linear"), UNIT, 0)
    with pytest.raises(ValueError):
        line_mean_x(builtin("linear"), UNIT, 0.5, 5)


def test_line_means():
    assert line_mean_x(builtin("linear"), UNIT, 0.5, 2) == 1.0
    assert line_mean_y(builtin("linear"), UNIT, 0.5, 2) == 1.0
    assert line_mean_x(lambda x, y: 4.25, UNIT, 0.9, 8) == 4.25
    # analytic: mean of |x-1/2| over [0,1] is 1/4
    got = line_mean_x(builtin("cone"), UNIT, 0.5, 256)
    assert abs(got - 0.25) < 1e-6


def test_grid_path_matches_scalar_path_exactly_for_exact_ops():
    # cone uses only +,-,abs: numpy and scalar evaluation agree bit-for-bit,
    # so the two oracle code paths must too
    tree = builtin("cone")
    rect = Rectangle(-0.75, 2.0, 0.25, 1.5)
    via_grid = mean_value_oracle(ExprFunction(tree), rect, 64)
    via_scalar = mean_value_oracle(
        lambda x, y: abs(x - 0.5) + abs(y - 0.5), rect, 64)
    assert via_grid == via_scalar


def test_degenerate_rects_reduce_dimension():
    line = Rectangle(0.0, 1.0, 0.4, 0.4)
    got = mean_value_oracle(lambda x, y: abs(x - 0.5) + y, line, 256)
    assert abs(got - (0.25 + 0.4)) < 1e-6
    column = Rectangle(0.25, 0.25, 0.0, 2.0)
    got = mean_value_oracle(lambda x, y: x + y, column, 4)
    assert got == pytest.approx(0.25 + 1.0, rel=1e-15)
    point = Rectangle(0.5, 0.5, 0.25, 0.25)
    assert mean_value_oracle(lambda x, y: x * y, point, 2) == 0.125


def test_oracle_self_convergence_monotone_on_smooth():
    for source in ("sin(x)+cos(2*y)", "exp(x/2)+y^2", "sin(5*x)*sin(5*y)"):
        f = ExprFunction(parse(source))
        gaps = []
        for n in (32, 64, 128, 256):
            gaps.append(abs(mean_value_oracle(f, UNIT, n)
                            - mean_value_oracle(f, UNIT, 2 * n)))
        assert gaps[0] >= gaps[1] >= gaps[2] >= gaps[3]


def test_chain_terms_equal_for_constant():
    f = lambda x, y: 3.0
    cx, cy = UNIT.center_x(), UNIT.center_y()
    terms = [
        midpoint_value(f, UNIT),
        (line_mean_x(f, UNIT, cy, 8) + line_mean_y(f, UNIT, cx, 8)) / 2.0,
        mean_value_oracle(f, UNIT, 8),
        (line_mean_x(f, UNIT, 0.0, 8) + line_mean_x(f, UNIT, 1.0, 8)
         + line_mean_y(f, UNIT, 0.0, 8) + line_mean_y(f, UNIT, 1.0, 8)) / 4.0,
        corner_average(f, UNIT),
    ]
    assert terms == [3.0] * 5


def test_h_value_endpoints_are_bitwise():
    f = ExprFunction(builtin("sincos"))
    rect = Rectangle(-1.3, 2.7, 0.1, 1.9)
    assert h_value(f, rect, UnitPair(0.0, 0.0), 64) == midpoint_value(f, rect)
    assert h_value(f, rect, UnitPair(1.0, 1.0), 64) == \
        mean_value_oracle(f, rect, 64)


def test_h_value_on_linear_is_center_value():
    f = ExprFunction(builtin("linear"))
    for ts in (UnitPair(0.25, 0.75), UnitPair(0.5, 0.5), UnitPair(1.0, 0.0)):
        assert h_value(f, UNIT, ts, 2) == pytest.approx(1.0, abs=1e-14)


def test_h_value_shares_oracle_code_path():
    f = ExprFunction(builtin("cone"))
    ts = UnitPair(0.5, 0.25)
    assert h_value(f, UNIT, ts, 64) == \
        mean_value_oracle(f, shrink_toward_center(UNIT, ts), 64)


def test_compensated_sum_is_exact():
    values = [1e16, 1.0, -1e16, 1.0] * 100
    assert compensated_sum(values) == 200.0
    assert compensated_sum([0.1] * 10) == pytest.approx(1.0, abs=1e-16)


def test_h_value_cone_analytic():
    # centered cone: mean over the shrunken square [1/2 +- t/2] x [1/2 +- s/2]
    # is t/4 + s/4
    f = ExprFunction(builtin("cone"))
    for t, s in ((0.5, 0.5), (0.25, 0.75), (1.0, 0.5)):
        got = h_value(f, UNIT, UnitPair(t, s), 64)
        assert got == pytest.approx(t / 4.0 + s / 4.0, abs=1e-12)
