"""Named algebras shipped with the package."""

from __future__ import annotations

import re
from fractions import Fraction
from importlib import resources

from .algebra import FiniteAlgebra, format_algebra, parse_algebra

EXAMPLE_NAME = "example-5.13"


def example_513_text() -> str:
    return resources.files("qwalg.data").joinpath("example-5.13.alg").read_text(encoding="utf-8")


def example_513() -> FiniteAlgebra:
    return parse_algebra(example_513_text())


def boolean2() -> FiniteAlgebra:
    return FiniteAlgebra([[1, 1], [0, 1]], one=1, zero=0, names=["0", "1"])


def lukasiewicz(n: int) -> FiniteAlgebra:
    """The n-element Łukasiewicz chain {0, 1/(n-1), ..., 1}, x -> y = min(1, 1 - x + y)."""
    if n < 2:
        raise ValueError("a Łukasiewicz chain needs at least two elements")
    top = n - 1
    imp = [[min(top, top - i + j) for j in range(n)] for i in range(n)]
    names = [str(Fraction(i, top)) for i in range(n)]
    return FiniteAlgebra(imp, one=top, zero=0, names=names)


def godel(n: int) -> FiniteAlgebra:
    """n-element Gödel chain: x -> y = 1 if x <= y else y (not involutive for n >= 3)."""
    top = n - 1
    imp = [[top if i <= j else j for j in range(n)] for i in range(n)]
    names = [str(Fraction(i, top)) for i in range(n)]
    return FiniteAlgebra(imp, one=top, zero=0, names=names)


def builtin(name: str) -> FiniteAlgebra:
    if name == EXAMPLE_NAME:
        return example_513()
    if name == "boolean-2":
        return boolean2()
    m = re.fullmatch(r"lukasiewicz-(\d+)", name)
    if m:
        return lukasiewicz(int(m.group(1)))
    m = re.fullmatch(r"godel-(\d+)", name)
    if m:
        return godel(int(m.group(1)))
    raise KeyError(f"unknown builtin {name!r}; try {', '.join(builtin_names())}")


def builtin_names() -> list[str]:
    return [EXAMPLE_NAME, "boolean-2", "lukasiewicz-<n>", "godel-<n>"]


def builtin_text(name: str) -> str:
    if name == EXAMPLE_NAME:
        return example_513_text()
    return format_algebra(builtin(name))
