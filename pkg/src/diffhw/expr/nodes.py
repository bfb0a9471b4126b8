"""Noeuds d'expression immuables et constructeurs avec pliage de constantes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Iterable, Sequence, Union


class ParamKind(str, Enum):
    TECH = "tech"
    ARCH = "arch"


class ValueDomain(str, Enum):
    REAL = "real"
    NATURAL = "natural"


@dataclass(frozen=True)
class ParamId:
    name: str
    kind: ParamKind = ParamKind.TECH
    domain: ValueDomain = ValueDomain.REAL

    def __str__(self) -> str:
        return self.name


Number = Union[int, float]
ExprLike = Union["Expr", int, float]


class Expr:
    """Base des noeuds. Les paramètres libres sont calculés à la construction."""

    op: ClassVar[str] = ""

    def children(self) -> tuple["Expr", ...]:
        return ()

    @property
    def params(self) -> frozenset[str]:
        return self._params  # type: ignore[attr-defined]

    def _init_params(self) -> None:
        names: frozenset[str] = frozenset()
        for child in self.children():
            names = names | child.params
        object.__setattr__(self, "_params", names)

    def __post_init__(self) -> None:
        self._init_params()

    def __repr__(self) -> str:
        from diffhw.expr.text import dump

        return f"Expr({dump(self)})"

    # Opérateurs : passent par les constructeurs qui plient les constantes
    def __add__(self, other: ExprLike) -> "Expr":
        return add(self, other)

    def __radd__(self, other: ExprLike) -> "Expr":
        return add(other, self)

    def __sub__(self, other: ExprLike) -> "Expr":
        return sub(self, other)

    def __rsub__(self, other: ExprLike) -> "Expr":
        return sub(other, self)

    def __mul__(self, other: ExprLike) -> "Expr":
        return mul(self, other)

    def __rmul__(self, other: ExprLike) -> "Expr":
        return mul(other, self)

    def __truediv__(self, other: ExprLike) -> "Expr":
        return div(self, other)

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return div(other, self)

    def __neg__(self) -> "Expr":
        return sub(Const(0.0), self)


@dataclass(frozen=True, repr=False, eq=True)
class Const(Expr):
    value: float
    op: ClassVar[str] = "const"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "_params", frozenset())


@dataclass(frozen=True, repr=False, eq=True)
class Param(Expr):
    pid: ParamId
    op: ClassVar[str] = "param"

    def __post_init__(self) -> None:
        object.__setattr__(self, "_params", frozenset((self.pid.name,)))

    @property
    def name(self) -> str:
        return self.pid.name


@dataclass(frozen=True, repr=False, eq=True)
class Binary(Expr):
    a: Expr
    b: Expr

    def children(self) -> tuple[Expr, ...]:
        return (self.a, self.b)


class Add(Binary):
    op = "add"


class Sub(Binary):
    op = "sub"


class Mul(Binary):
    op = "mul"


class Div(Binary):
    op = "div"


class Max(Binary):
    op = "max"


class Min(Binary):
    op = "min"


@dataclass(frozen=True, repr=False, eq=True)
class Unary(Expr):
    x: Expr

    def children(self) -> tuple[Expr, ...]:
        return (self.x,)


class Ceil(Unary):
    op = "ceil"


class Exp(Unary):
    op = "exp"


@dataclass(frozen=True, repr=False, eq=True)
class Guard(Expr):
    """Vaut `then` si lhs >= rhs, sinon `other` (sous-gradient de max/min)."""

    lhs: Expr
    rhs: Expr
    then: Expr
    other: Expr
    op: ClassVar[str] = "guard"

    def children(self) -> tuple[Expr, ...]:
        return (self.lhs, self.rhs, self.then, self.other)


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(x: ExprLike | ParamId) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, ParamId):
        return Param(x)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise TypeError(f"type non supporté dans une expression: {type(x).__name__}")
    return Const(x)


def const(value: Number) -> Const:
    return Const(value)


def param(name: str, kind: ParamKind = ParamKind.TECH, domain: ValueDomain = ValueDomain.REAL) -> Param:
    return Param(ParamId(name, kind, domain))


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


def add(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return Add(a, b)


def sub(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0.0):
        return a
    return Sub(a, b)


def mul(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return Mul(a, b)


def div(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if _is(b, 0.0):
        raise ZeroDivisionError("dénominateur structurellement nul")
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    return Div(a, b)


def maximum(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return a if a.value >= b.value else b
    return Max(a, b)


def minimum(a: ExprLike, b: ExprLike) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return a if a.value <= b.value else b
    return Min(a, b)


def ceil(x: ExprLike) -> Expr:
    x = as_expr(x)
    if isinstance(x, Const):
        return Const(float(math.ceil(x.value)))
    return Ceil(x)


def exp(x: ExprLike) -> Expr:
    x = as_expr(x)
    if isinstance(x, Const):
        return Const(math.exp(x.value))
    return Exp(x)


def guard(lhs: ExprLike, rhs: ExprLike, then: ExprLike, other: ExprLike) -> Expr:
    lhs, rhs, then, other = as_expr(lhs), as_expr(rhs), as_expr(then), as_expr(other)
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        return then if lhs.value >= rhs.value else other
    if then == other:
        return then
    return Guard(lhs, rhs, then, other)


def max_of(items: Sequence[ExprLike]) -> Expr:
    """max n-aire, plié à gauche (départage vers le premier opérande)."""
    if not items:
        return ZERO
    acc = as_expr(items[0])
    for item in items[1:]:
        acc = maximum(acc, item)
    return acc


def min_of(items: Sequence[ExprLike]) -> Expr:
    if not items:
        return ZERO
    acc = as_expr(items[0])
    for item in items[1:]:
        acc = minimum(acc, item)
    return acc


def sum_exprs(items: Iterable[ExprLike]) -> Expr:
    """Somme équilibrée (profondeur log n)."""
    terms = [as_expr(t) for t in items]
    if not terms:
        return ZERO
    while len(terms) > 1:
        paired = [add(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def fold_sum(items: Iterable[ExprLike]) -> Expr:
    """Somme pliée à gauche : l'ordre d'évaluation est celui de la liste."""
    acc: Expr = ZERO
    for item in items:
        acc = add(acc, item)
    return acc


CONSTRUCTORS = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "div": div,
    "max": maximum,
    "min": minimum,
    "ceil": ceil,
    "exp": exp,
    "guard": guard,
}
