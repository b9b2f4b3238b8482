"""AST node types and source rendering for the bivariate expression language."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

UNARY_OPS = ("neg", "abs", "sin", "cos", "exp", "sqrt")
BINARY_OPS = ("add", "sub", "mul", "div", "pow", "min", "max")

# `pos` is the byte offset of the node's defining token in the source text
# (-1 for synthesized nodes). It is excluded from equality so that trees
# parsed from different renderings of the same expression compare equal.


@dataclass(frozen=True)
class Const:
    value: float
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"
    pos: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        if self.name not in ("x", "y"):
            raise ValueError(f"variable must be 'x' or 'y', got {self.name!r}")


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"
    pos: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary op {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")


Expr = Union[Const, Var, Unary, Binary]


def pow_exponent(node: Binary) -> int:
    """The validated integer exponent of a pow node."""
    e = node.right
    if not isinstance(e, Const) or e.value < 0 or e.value != int(e.value):
        raise ValueError("pow exponent must be a nonnegative integer constant")
    return int(e.value)


# Grammar levels used to insert the minimal parentheses that survive a
# re-parse: additive 1, multiplicative 2, unary minus 3, pow 4, atom 5.
_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def to_source(e: Expr) -> str:
    """Render the tree as parseable source; re-parsing yields an equal tree."""
    return _render(e, 0)


def _render(e: Expr, min_level: int) -> str:
    if isinstance(e, Const):
        text = repr(e.value)
        level = _NEG if text.startswith("-") else _ATOM
    elif isinstance(e, Var):
        text, level = e.name, _ATOM
    elif isinstance(e, Unary):
        if e.op == "neg":
            text, level = "-" + _render(e.arg, _NEG), _NEG
        else:
            text, level = f"{e.op}({_render(e.arg, 0)})", _ATOM
    elif isinstance(e, Binary):
        if e.op == "add":
            text, level = f"{_render(e.left, _ADD)}+{_render(e.right, _MUL)}", _ADD
        elif e.op == "sub":
            text, level = f"{_render(e.left, _ADD)}-{_render(e.right, _MUL)}", _ADD
        elif e.op == "mul":
            text, level = f"{_render(e.left, _MUL)}*{_render(e.right, _NEG)}", _MUL
        elif e.op == "div":
            text, level = f"{_render(e.left, _MUL)}/{_render(e.right, _NEG)}", _MUL
        elif e.op == "pow":
            text, level = f"{_render(e.left, _ATOM)}^{pow_exponent(e)}", _POW
        else:  # min / max
            text = f"{e.op}({_render(e.left, 0)}, {_render(e.right, 0)})"
            level = _ATOM
    else:
        raise TypeError(f"not an expression node: {e!r}")
    if level < min_level:
        return "(" + text + ")"
    return text
