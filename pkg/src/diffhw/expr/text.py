"""Forme textuelle préfixe des expressions : `(add (mul a 2) b)`."""
from __future__ import annotations

import re
from typing import Callable, List, Optional, Union

from diffhw.errors import ParseError
from diffhw.expr.nodes import CONSTRUCTORS, Const, Expr, Param, ParamId

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")

_ARITY = {"ceil": (1, 1), "exp": (1, 1), "guard": (4, 4), "sub": (2, 2), "div": (2, 2)}
_VARIADIC = {"add", "mul", "max", "min"}

Resolver = Callable[[str], Union[ParamId, Expr]]


def format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def dump(e: Expr) -> str:
    parts: List[str] = []

    def walk(n: Expr) -> None:
        if isinstance(n, Const):
            parts.append(format_number(n.value))
        elif isinstance(n, Param):
            parts.append(n.name)
        else:
            parts.append("(" + n.op)
            for child in n.children():
                parts.append(" ")
                walk(child)
            parts.append(")")

    walk(e)
    return "".join(parts)


def parse(text: str, resolver: Optional[Resolver] = None) -> Expr:
    """Analyse une expression préfixe.

    `resolver` transforme un nom en ParamId (ou en expression déjà construite) ;
    par défaut un paramètre technologique réel du même nom.
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ParseError("expression vide")
    pos = 0

    def leaf(tok: str) -> Expr:
        if _NUMBER.match(tok):
            return Const(float(tok))
        if not _NAME.match(tok):
            raise ParseError(f"jeton invalide: {tok!r}")
        target = resolver(tok) if resolver else ParamId(tok)
        return target if isinstance(target, Expr) else Param(target)

    def node() -> Expr:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("fin d'expression inattendue")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ParseError("')' inattendue")
        if tok != "(":
            return leaf(tok)
        if pos >= len(tokens):
            raise ParseError("opérateur manquant")
        op = tokens[pos]
        pos += 1
        if op not in CONSTRUCTORS:
            raise ParseError(f"opérateur inconnu: {op!r}")
        args: List[Expr] = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(node())
        if pos >= len(tokens):
            raise ParseError("')' manquante")
        pos += 1
        if op in _VARIADIC:
            if len(args) < 2:
                raise ParseError(f"{op} attend au moins 2 arguments")
            acc = args[0]
            for arg in args[1:]:
                acc = CONSTRUCTORS[op](acc, arg)
            return acc
        lo, hi = _ARITY[op]
        if not lo <= len(args) <= hi:
            raise ParseError(f"{op} attend {lo} argument(s), reçu {len(args)}")
        return CONSTRUCTORS[op](*args)

    result = node()
    if pos != len(tokens):
        raise ParseError(f"contenu en trop après l'expression: {' '.join(tokens[pos:])}")
    return result
