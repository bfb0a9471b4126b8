"""Règle de mise à jour : descente de gradient bornée, contrainte de surface, treillis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping

from diffhw.dopt.backward import GradientAccumulator
from diffhw.dopt.schemas import Objective
from diffhw.hwmodel import ParamSpec


@dataclass(frozen=True)
class Update:
    relaxed: Dict[str, float]
    values: Dict[str, float]
    clamped: FrozenSet[str]


def effective_gradients(grads: GradientAccumulator, specs: Mapping[str, ParamSpec], obj: Objective) -> Dict[str, float]:
    """Tant que a > A, un paramètre couplé à la surface suit au moins F/A·|∂a/∂p|
    dans le sens qui réduit la surface."""
    g = {name: grads.g.get(name, 0.0) for name in specs}
    if grads.area <= obj.area_max:
        return g
    floor = abs(grads.figure) / obj.area_max
    for name in specs:
        da = grads.area_grad.get(name, 0.0)
        if da:
            g[name] = math.copysign(max(abs(g[name]), floor * abs(da)), da)
    return g


def _scale(spec: ParamSpec, value: float) -> float:
    return abs(value) or (spec.upper - spec.lower) or 1.0


def auto_learning_rate(
    g: Mapping[str, float],
    relaxed: Mapping[str, float],
    specs: Mapping[str, ParamSpec],
    max_step: float,
) -> float:
    """α tel que le premier pas ne déplace aucun paramètre de plus de max_step (relatif)."""
    worst = max((abs(g[n]) / _scale(specs[n], relaxed[n]) for n in specs), default=0.0)
    return max_step / worst if worst > 0 else 0.0


def snap_values(relaxed: Mapping[str, float], specs: Mapping[str, ParamSpec]) -> Dict[str, float]:
    return {name: specs[name].snap(relaxed[name]) for name in specs}


def apply_update(
    assigns: Mapping[str, float],
    grads: GradientAccumulator,
    specs: Mapping[str, ParamSpec],
    obj: Objective,
    learning_rate: float,
) -> Update:
    """p' = clamp(p − α·g_eff[p]) sur les valeurs relâchées, puis projection sur le treillis."""
    g = effective_gradients(grads, specs, obj)
    relaxed: Dict[str, float] = {}
    clamped = set()
    for name, spec in specs.items():
        raw = assigns[name] - learning_rate * g[name]
        relaxed[name] = spec.clamp(raw)
        if relaxed[name] != raw:
            clamped.add(name)
    return Update(relaxed, snap_values(relaxed, specs), frozenset(clamped))
