"""Algèbre symbolique différentiable."""
from diffhw.expr.calculus import (
    Assignment,
    bind,
    diff,
    evaluate,
    free_params,
    gradient,
    param_ids,
    rename,
    size,
    substitute,
)
from diffhw.expr.nodes import (
    ONE,
    ZERO,
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
    ParamKind,
    Sub,
    ValueDomain,
    add,
    as_expr,
    ceil,
    const,
    div,
    exp,
    fold_sum,
    guard,
    max_of,
    maximum,
    min_of,
    minimum,
    mul,
    param,
    sub,
    sum_exprs,
)
from diffhw.expr.text import dump, parse

__all__ = [
    "Assignment", "bind", "diff", "evaluate", "free_params", "gradient", "param_ids",
    "rename", "size", "substitute", "ONE", "ZERO", "Add", "Ceil", "Const", "Div", "Exp",
    "Expr", "Guard", "Max", "Min", "Mul", "Param", "ParamId", "ParamKind", "Sub",
    "ValueDomain", "add", "as_expr", "ceil", "const", "div", "exp", "fold_sum", "guard",
    "max_of", "maximum", "min_of", "minimum", "mul", "param", "sub", "sum_exprs", "dump",
    "parse",
]
