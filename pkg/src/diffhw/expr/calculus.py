"""Évaluation, dérivation symbolique et substitution."""
from __future__ import annotations

import math
from typing import Callable, Dict, Mapping, Union

from diffhw.errors import UnboundParameter
from diffhw.expr.nodes import (
    ZERO,
    ONE,
    Add,
    Ceil,
    Const,
    Div,
    Exp,
    Expr,
    Guard,
    Max,
    Min,
    Mul,
    Param,
    ParamId,
    Sub,
    CONSTRUCTORS,
    add,
    div,
    guard,
    mul,
    sub,
)

Assignment = Mapping[str, float]

_BINARY_EVAL: Dict[type, Callable[[float, float], float]] = {
    Add: lambda x, y: x + y,
    Sub: lambda x, y: x - y,
    Mul: lambda x, y: x * y,
    Div: lambda x, y: x / y,
    Max: lambda x, y: x if x >= y else y,
    Min: lambda x, y: x if x <= y else y,
}


def _name(p: Union[str, ParamId, Param]) -> str:
    if isinstance(p, Param):
        return p.name
    if isinstance(p, ParamId):
        return p.name
    return p


def free_params(e: Expr) -> frozenset[str]:
    return e.params


def evaluate(e: Expr, assignment: Assignment) -> float:
    """Évalue `e`. Lève UnboundParameter si un paramètre libre manque."""
    missing = e.params - assignment.keys()
    if missing:
        raise UnboundParameter(sorted(missing)[0])
    memo: Dict[int, float] = {}

    def ev(n: Expr) -> float:
        key = id(n)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(n, Const):
            value = n.value
        elif isinstance(n, Param):
            value = float(assignment[n.name])
        elif isinstance(n, Guard):
            value = ev(n.then) if ev(n.lhs) >= ev(n.rhs) else ev(n.other)
        elif isinstance(n, Ceil):
            value = float(math.ceil(ev(n.x)))
        elif isinstance(n, Exp):
            value = math.exp(ev(n.x))
        else:
            value = _BINARY_EVAL[type(n)](ev(n.a), ev(n.b))  # type: ignore[attr-defined]
        memo[key] = value
        return value

    return ev(e)


def diff(e: Expr, p: Union[str, ParamId, Param]) -> Expr:
    """Dérivée partielle symbolique de `e` par rapport à `p`.

    max/min donnent un sous-gradient gardé (égalité : premier opérande),
    ceil est traversé tel quel.
    """
    name = _name(p)
    if name not in e.params:
        return ZERO
    memo: Dict[int, Expr] = {}

    def d(n: Expr) -> Expr:
        if name not in n.params:
            return ZERO
        key = id(n)
        if key in memo:
            return memo[key]
        if isinstance(n, Param):
            out: Expr = ONE
        elif isinstance(n, Add):
            out = add(d(n.a), d(n.b))
        elif isinstance(n, Sub):
            out = sub(d(n.a), d(n.b))
        elif isinstance(n, Mul):
            out = add(mul(d(n.a), n.b), mul(n.a, d(n.b)))
        elif isinstance(n, Div):
            out = sub(div(d(n.a), n.b), div(mul(n.a, d(n.b)), mul(n.b, n.b)))
        elif isinstance(n, Max):
            out = guard(n.a, n.b, d(n.a), d(n.b))
        elif isinstance(n, Min):
            out = guard(n.b, n.a, d(n.a), d(n.b))
        elif isinstance(n, Ceil):
            out = d(n.x)
        elif isinstance(n, Exp):
            out = mul(n, d(n.x))
        elif isinstance(n, Guard):
            out = guard(n.lhs, n.rhs, d(n.then), d(n.other))
        else:
            raise TypeError(f"noeud inconnu: {type(n).__name__}")
        memo[key] = out
        return out

    return d(e)


def gradient(e: Expr, assignment: Assignment) -> Dict[str, float]:
    """Valeurs des dérivées partielles pour tous les paramètres libres."""
    return {name: evaluate(diff(e, name), assignment) for name in sorted(e.params)}


def bind(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Remplace les paramètres nommés par des expressions (reconstruction pliée)."""
    if not mapping or not (e.params & mapping.keys()):
        return e
    memo: Dict[int, Expr] = {}

    def b(n: Expr) -> Expr:
        if not (n.params & mapping.keys()):
            return n
        key = id(n)
        if key in memo:
            return memo[key]
        if isinstance(n, Param):
            out = mapping[n.name]
        else:
            out = CONSTRUCTORS[n.op](*(b(c) for c in n.children()))
        memo[key] = out
        return out

    return b(e)


def substitute(e: Expr, assignment: Assignment) -> Expr:
    """Spécialisation partielle : les paramètres assignés deviennent des constantes."""
    return bind(e, {k: Const(v) for k, v in assignment.items()})


def rename(e: Expr, mapping: Mapping[str, ParamId]) -> Expr:
    return bind(e, {k: Param(pid) for k, pid in mapping.items()})


def param_ids(e: Expr) -> Dict[str, ParamId]:
    """Identifiants complets (genre, domaine) des paramètres libres."""
    found: Dict[str, ParamId] = {}
    seen: set[int] = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if id(n) in seen or not n.params:
            continue
        seen.add(id(n))
        if isinstance(n, Param):
            found.setdefault(n.name, n.pid)
        stack.extend(n.children())
    return found


def size(e: Expr) -> int:
    """Nombre de noeuds distincts (partage compris)."""
    seen: set[int] = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.extend(n.children())
    return len(seen)


__all__ = [
    "Assignment",
    "bind",
    "diff",
    "evaluate",
    "free_params",
    "gradient",
    "param_ids",
    "rename",
    "size",
    "substitute",
]
