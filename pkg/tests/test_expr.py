"""Parser, printer, and evaluator tests."""

import math
import random

import numpy as np
import pytest

from corpus import MALFORMED_ROWS, PRECEDENCE_ROWS, SMOOTH_ON_UNIT
from lipcube.expr import (
    Binary,
    Const,
    EvalError,
    ParseError,
    Unary,
    UnknownBuiltin,
    Var,
    builtin,
    builtin_names,
    evaluate,
    evaluate_grid,
    parse,
    to_source,
)


@pytest.mark.parametrize("source,x,y,expected", PRECEDENCE_ROWS)
def test_precedence_corpus_exact(source, x, y, expected):
    assert evaluate(parse(source), x, y) == expected


def test_no_constant_folding():
    tree = parse("2+3*4")
    assert isinstance(tree, Binary) and tree.op == "add"
    assert tree.left == Const(2.0)
    assert tree.right == Binary("mul", Const(3.0), Const(4.0))


def test_neg_binds_looser_than_pow():
    assert parse("-3^2") == Unary("neg", Binary("pow", Const(3.0), Const(2.0)))
    assert parse("(-3)^2") == Binary("pow", Unary("neg", Const(3.0)), Const(2.0))


def test_left_associativity_shapes():
    assert parse("2-3-4") == Binary("sub", Binary("sub", Const(2.0), Const(3.0)),
                                    Const(4.0))
    assert parse("12/4/3") == Binary("div", Binary("div", Const(12.0), Const(4.0)),
                                     Const(3.0))


@pytest.mark.parametrize("source", [row[0] for row in PRECEDENCE_ROWS]
                         + SMOOTH_ON_UNIT
                         + ["--x", "x- -y", "-(x*y)^2", "min(x+1, max(y, 2))^3",
                            "1e-3*x", "abs(-x)"])
def test_round_trip_structural_identity(source):
    tree = parse(source)
    assert parse(to_source(tree)) == tree


def test_round_trip_twice_is_stable():
    for source in [row[0] for row in PRECEDENCE_ROWS]:
        printed = to_source(parse(source))
        assert to_source(parse(printed)) == printed


@pytest.mark.parametrize("source,position", MALFORMED_ROWS)
def test_malformed_inputs(source, position):
    with pytest.raises(ParseError) as err:
        parse(source)
    assert err.value.position == position
    assert 0 <= err.value.position <= len(source) + 1


def test_whitespace_insignificant():
    assert parse(" 2 + 3\t*\n4 ") == parse("2+3*4")


def test_evaluate_examples():
    assert evaluate(parse("x+y"), 0.5, 0.5) == 1.0
    assert evaluate(parse("sin(x)*cos(2*y)"), 0.0, 0.0) == 0.0
    with pytest.raises(EvalError) as err:
        evaluate(parse("1/x"), 0.0, 1.0)
    assert err.value.kind == "div_by_zero"
    assert err.value.position == 1


def test_evaluate_domain_errors():
    with pytest.raises(EvalError) as err:
        evaluate(parse("sqrt(x-2)"), 0.0, 0.0)
    assert err.value.kind == "domain"
    assert err.value.position == 0
    with pytest.raises(EvalError) as err:
        evaluate(parse("exp(x)"), 1000.0, 0.0)
    assert err.value.kind == "domain"
    # 0/0 is a division error, not NaN
    with pytest.raises(EvalError):
        evaluate(parse("x/y"), 0.0, 0.0)


def test_pow_zero_convention():
    assert evaluate(parse("x^0"), 0.0, 0.0) == 1.0
    assert evaluate(parse("(-2)^3"), 0.0, 0.0) == -8.0


def test_builtins():
    assert set(builtin_names()) == {"linear", "cone", "sincos", "prodconvex",
                                    "wiggle"}
    assert evaluate(builtin("linear"), 0.3, 0.4) == 0.7
    assert evaluate(builtin("cone"), 0.0, 0.0) == 1.0
    assert evaluate(builtin("sincos"), 0.0, 0.0) == 1.0
    assert evaluate(builtin("prodconvex"), 2.0, 3.0) == 6.0
    assert evaluate(builtin("wiggle"), 0.1, 0.2) == \
        math.sin(0.5) * math.sin(1.0)
    with pytest.raises(UnknownBuiltin):
        builtin("nosuch")


def test_prodconvex_is_not_jointly_convex():
    # along the segment from (0, 1) to (1, 0) the function is t(1-t) > 0,
    # while the endpoint values are both 0: joint convexity fails
    f = builtin("prodconvex")
    assert evaluate(f, 0.0, 1.0) == 0.0
    assert evaluate(f, 1.0, 0.0) == 0.0
    for t in (0.25, 0.5, 0.75):
        mid = evaluate(f, t * 0.0 + (1 - t) * 1.0, t * 1.0 + (1 - t) * 0.0)
        assert mid == t * (1 - t)
        assert mid > 0.0


def test_evaluate_is_pure():
    tree = parse("sin(x)+y^2")
    first = [evaluate(tree, 0.1 * i, 0.2 * i) for i in range(10)]
    second = [evaluate(tree, 0.1 * i, 0.2 * i) for i in range(10)]
    assert first == second


def test_grid_matches_scalar():
    rng = random.Random(3)
    xs = np.array([rng.uniform(0, 1) for _ in range(64)])
    ys = np.array([rng.uniform(0, 1) for _ in range(64)])
    for source in SMOOTH_ON_UNIT:
        tree = parse(source)
        grid = evaluate_grid(tree, xs, ys)
        for i in range(64):
            assert grid[i] == pytest.approx(
                evaluate(tree, float(xs[i]), float(ys[i])), rel=1e-14, abs=1e-14)


def test_grid_broadcasting_and_errors():
    tree = parse("x+2*y")
    grid = evaluate_grid(tree, np.array([0.0, 1.0])[:, None],
                         np.array([0.0, 1.0, 2.0])[None, :])
    assert grid.shape == (2, 3)
    assert grid[1][2] == 5.0
    const_grid = evaluate_grid(parse("3"), np.zeros(4), np.zeros(4))
    assert const_grid.tolist() == [3.0] * 4
    with pytest.raises(EvalError) as err:
        evaluate_grid(parse("1/x"), np.array([1.0, 0.0]), np.array([0.0, 0.0]))
    assert err.value.kind == "div_by_zero"
    with pytest.raises(EvalError):
        evaluate_grid(parse("sqrt(x)"), np.array([1.0, -1.0]), np.zeros(2))


def test_repr_constants_round_trip():
    # printed constants reparse to the same double
    for value in (0.1, 1e-6, 12345.678901234567, 2.0 ** -40, 1e300):
        tree = Binary("add", Const(value), Var("x"))
        again = parse(to_source(tree))
        assert again.left.value == value
