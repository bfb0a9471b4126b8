"""Problèmes d'optimisation : workload réel (passe avant complète) et produit scalaire."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional, Protocol, Sequence, Tuple

from diffhw.dopt.backward import BipartiteGraph, GradientAccumulator, backward_pass
from diffhw.dopt.schemas import DotProductConfig, Objective, ObjectiveKind
from diffhw.dsim import estimate
from diffhw.errors import ValidationError
from diffhw.expr import (
    Const,
    Expr,
    Param,
    ParamId,
    ParamKind,
    ValueDomain,
    add,
    ceil,
    diff,
    div,
    evaluate,
    fold_sum,
    maximum,
    mul,
)
from diffhw.hwmodel import (
    CompUnit,
    ConcreteHardwareModel,
    HardwareModel,
    Lattice,
    MemUnit,
    Metric,
    ParamSpec,
    specialize,
)
from diffhw.mapper import MapperConfig, MapResult, map_workload
from diffhw.workload import Workload

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Evaluation:
    runtime: float
    energy: float
    area: float
    figure: float
    objective: float
    feasible: bool


class Problem(Protocol):
    specs: Dict[str, ParamSpec]

    @property
    def area_params(self) -> FrozenSet[str]: ...

    def area(self, values: Mapping[str, float]) -> float: ...

    def evaluate(self, values: Mapping[str, float], obj: Objective) -> Evaluation: ...

    def backward(self, values: Mapping[str, float], obj: Objective) -> GradientAccumulator: ...


def _evaluation(obj: Objective, runtime: float, energy: float, area: float) -> Evaluation:
    figure = obj.figure(runtime, energy)
    return Evaluation(runtime, energy, area, figure, obj.value(figure, area), obj.feasible(area))


class WorkloadProblem:
    """specialize → map_workload → estimate ; les autres paramètres restent à leur seed."""

    def __init__(
        self,
        w: Workload,
        h: HardwareModel,
        mapper_cfg: Optional[MapperConfig] = None,
        names: Optional[Sequence[str]] = None,
        base: Optional[Mapping[str, float]] = None,
    ):
        unknown = set(names or ()) - h.param_table.keys()
        if unknown:
            raise ValidationError("paramètres à optimiser inconnus", missing=unknown)
        self.w = w
        self.h = h
        self.mapper_cfg = mapper_cfg or MapperConfig()
        self.specs: Dict[str, ParamSpec] = {n: h.param_table[n] for n in (names or h.param_table)}
        tech, arch = h.seed_assignment()
        self.base: Dict[str, float] = {**tech, **arch, **(base or {})}
        self.graph = BipartiteGraph.from_model(h)
        self._last: Optional[Tuple[Tuple[Tuple[str, float], ...], ConcreteHardwareModel, MapResult]] = None

    @property
    def area_params(self) -> FrozenSet[str]:
        names: set = set()
        for (_, q), e in self.h.entries.items():
            if q is Metric.AREA:
                names |= e.params
        return frozenset(names & self.specs.keys())

    def full(self, values: Mapping[str, float]) -> Dict[str, float]:
        return {**self.base, **values}

    def concrete(self, values: Mapping[str, float]) -> ConcreteHardwareModel:
        return specialize(self.h, *self.h.split_assignment(self.full(values)))

    def forward(self, values: Mapping[str, float]) -> Tuple[ConcreteHardwareModel, MapResult]:
        key = tuple(sorted(values.items()))
        if self._last is not None and self._last[0] == key:
            return self._last[1], self._last[2]
        c = self.concrete(values)
        r = map_workload(self.w, c, self.mapper_cfg)
        self._last = (key, c, r)
        return c, r

    def area(self, values: Mapping[str, float]) -> float:
        c = self.concrete(values)
        total = 0.0
        for u in [*c.mem_units, *c.comp_units]:
            total += c.lookup(u, Metric.AREA)
        return total

    def evaluate(self, values: Mapping[str, float], obj: Objective) -> Evaluation:
        c, r = self.forward(values)
        est = estimate(r, c)
        return _evaluation(obj, est.runtime, est.energy, est.area)

    def backward(self, values: Mapping[str, float], obj: Objective) -> GradientAccumulator:
        c, r = self.forward(values)
        return backward_pass(r, self.h, self.full(values), obj, self.graph, c)


BLOCK = ParamId("B", ParamKind.ARCH, ValueDomain.NATURAL)
LANES = ParamId("P", ParamKind.ARCH, ValueDomain.NATURAL)


def memory_time(n: int, block: float, t1: float, t2: float) -> float:
    """Temps mémoire d'un segment : ⌈N/B⌉·(t1 + t2)."""
    return math.ceil(n / block) * (t1 + t2)


def memsize_time_gradient(n: int, block: float, block_ref: float, t1: float, t2: float) -> float:
    """(⌈N/B⌉ − ⌈N/B'⌉)·(t1 + t2) : gain de temps mémoire en passant de B à B'."""
    return (math.ceil(n / block) - math.ceil(n / block_ref)) * (t1 + t2)


class DotProductProblem:
    """Produit scalaire par tuiles de B mots, P multiplieurs en parallèle.

    F = Σ_i max(⌈B/P⌉·t4 + 2·t5, ⌈N_i/B⌉·(t1 + t2)) cycles,
    a = 2·sramArea·B + P·multArea + 2·adderArea.
    """

    def __init__(self, cfg: Optional[DotProductConfig] = None):
        self.cfg = cfg or DotProductConfig()
        cfg = self.cfg
        self.specs: Dict[str, ParamSpec] = {
            BLOCK.name: ParamSpec(BLOCK, cfg.block.seed, cfg.block.lower, cfg.block.upper, Lattice.POW2),
            LANES.name: ParamSpec(LANES, cfg.lanes.seed, cfg.lanes.lower, cfg.lanes.upper, Lattice.POW2),
        }
        b, p = Param(BLOCK), Param(LANES)
        self.compute_expr = add(mul(ceil(div(b, p)), Const(cfg.t4)), Const(2 * cfg.t5))
        self.memory_exprs = [mul(ceil(div(Const(n), b)), Const(cfg.t1 + cfg.t2)) for n in cfg.chunks]
        self.time_expr: Expr = fold_sum(maximum(self.compute_expr, m) for m in self.memory_exprs)
        self.area_expr: Expr = fold_sum(
            [
                mul(Const(2 * cfg.sram_area), b),
                mul(p, Const(cfg.mult_area)),
                Const(2 * cfg.adder_area),
            ]
        )

    @property
    def area_params(self) -> FrozenSet[str]:
        return frozenset(self.area_expr.params)

    @staticmethod
    def _check(obj: Objective) -> None:
        if obj.kind is not ObjectiveKind.TIME:
            raise ValidationError("le scénario produit scalaire n'optimise que le temps (objective=time)")

    def area(self, values: Mapping[str, float]) -> float:
        return evaluate(self.area_expr, values)

    def evaluate(self, values: Mapping[str, float], obj: Objective) -> Evaluation:
        self._check(obj)
        return _evaluation(obj, evaluate(self.time_expr, values), 0.0, self.area(values))

    def backward(self, values: Mapping[str, float], obj: Objective) -> GradientAccumulator:
        self._check(obj)
        acc = GradientAccumulator()
        t_c = evaluate(self.compute_expr, values)
        for m in self.memory_exprs:
            t_m = evaluate(m, values)
            t_min = min(t_c, t_m)
            acc.add_time(MemUnit.GLOBAL_BUF, t_min - t_m)
            acc.add_time(CompUnit.VECTOR, t_min - t_c)
        penalized = obj.expr(self.time_expr, self.area_expr)
        acc.figure = evaluate(self.time_expr, values)
        acc.area = self.area(values)
        acc.objective = evaluate(penalized, values)
        for name in self.specs:
            acc.g[name] = evaluate(diff(penalized, name), values)
            acc.area_grad[name] = evaluate(diff(self.area_expr, name), values)
        return acc
