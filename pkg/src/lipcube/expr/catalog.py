"""Named builtin test functions."""

from __future__ import annotations

from functools import lru_cache

from .nodes import Expr
from .parser import parse

_SOURCES = {
    "linear": "x+y",
    "cone": "abs(x-0.5)+abs(y-0.5)",
    "sincos": "sin(x)+cos(2*y)",
    "prodconvex": "x*y",
    "wiggle": "sin(5*x)*sin(5*y)",
}


class UnknownBuiltin(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown builtin function {name!r}; "
                         f"known: {', '.join(sorted(_SOURCES))}")


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_SOURCES))


def builtin_source(name: str) -> str:
    try:
        return _SOURCES[name]
    except KeyError:
        raise UnknownBuiltin(name) from None


@lru_cache(maxsize=None)
def builtin(name: str) -> Expr:
    return parse(builtin_source(name))
