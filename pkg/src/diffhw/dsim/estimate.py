"""Estimations runtime / énergie / puissance / surface à partir d'un placement.

Un seul constructeur d'expressions sert aux deux chemins : valeurs concrètes
(constantes) et expressions du modèle. L'évaluation du chemin symbolique au
point de spécialisation redonne donc exactement les nombres concrets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping

from diffhw.expr import (
    ZERO,
    Const,
    Expr,
    Param,
    ParamId,
    add,
    ceil,
    diff,
    div,
    evaluate,
    fold_sum,
    max_of,
    minimum,
    mul,
    sub,
    sum_exprs,
)
from diffhw.hwmodel import (
    ConcreteHardwareModel,
    HardwareModel,
    MemUnit,
    Metric,
    SocUnit,
    Unit,
    metric_key,
)
from diffhw.mapper import MapResult

MetricFn = Callable[[Unit, Metric], Expr]

# mW × s → nJ
LEAK_TO_NJ = 1e6
# nJ → J
NJ_TO_J = 1e-9


@dataclass(frozen=True)
class PerfEstimate:
    cycles: float
    runtime: float
    energy: float
    power: float
    area: float
    energy_by_unit: Dict[Unit, float]
    dynamic_by_unit: Dict[Unit, float]
    area_by_unit: Dict[Unit, float]

    @property
    def edp(self) -> float:
        return self.energy * self.runtime

    @property
    def memory_energy(self) -> float:
        total = 0.0
        for u, e in self.energy_by_unit.items():
            if isinstance(u, MemUnit):
                total += e
        return total


@dataclass(frozen=True)
class SymbolicEstimate:
    cycles: Expr
    runtime: Expr
    leak_time: Expr
    energy: Expr
    power: Expr
    area: Expr
    energy_by_unit: Dict[Unit, Expr]
    dynamic_by_unit: Dict[Unit, Expr]
    area_by_unit: Dict[Unit, Expr]

    @property
    def edp(self) -> Expr:
        return mul(self.energy, self.runtime)

    def evaluate(self, assignment: Mapping[str, float]) -> PerfEstimate:
        def ev(e: Expr) -> float:
            return evaluate(e, assignment)

        return PerfEstimate(
            cycles=ev(self.cycles),
            runtime=ev(self.runtime),
            energy=ev(self.energy),
            power=ev(self.power),
            area=ev(self.area),
            energy_by_unit={u: ev(e) for u, e in self.energy_by_unit.items()},
            dynamic_by_unit={u: ev(e) for u, e in self.dynamic_by_unit.items()},
            area_by_unit={u: ev(e) for u, e in self.area_by_unit.items()},
        )


def symbolic_cycles(r: MapResult, metric: MetricFn) -> Expr:
    """Reconstruit le nombre de cycles à partir des enregistrements.

    Même forme que le calcul du mapper : t_c = Σ ⌈ops/débit⌉,
    t_mem = ⌈octets/bande passante⌉, t_exec = max(...) + t_stream (ou somme),
    moins le crédit de recouvrement des sommets préchargés.
    """
    execs: List[Expr] = []
    credits: List[Expr] = []
    prev_t_c: Expr = ZERO
    for rec in r.records:
        t_c = fold_sum(ceil(div(Const(ops), metric(u, Metric.THROUGHPUT))) for u, ops in rec.comp.items())
        t_mem = [ceil(div(Const(rec.mem_bytes(m)), metric(m, Metric.BANDWIDTH))) for m in rec.t_mem]
        if rec.stream_bytes:
            t_stream = ceil(div(Const(rec.stream_bytes), metric(r.stream_level, Metric.BANDWIDTH)))
        else:
            t_stream = ZERO
        if r.overlap:
            execs.append(add(max_of([t_c, *t_mem]), t_stream))
        else:
            execs.append(fold_sum([t_c, *t_mem, t_stream]))
        if rec.prefetched:
            credits.append(minimum(max_of(t_mem), prev_t_c))
        prev_t_c = t_c
    return sub(sum_exprs(execs), sum_exprs(credits))


def build_estimate(r: MapResult, metric: MetricFn, cycles: Expr) -> SymbolicEstimate:
    """Formules de DSim : runtime = cycles / fréquence ; énergie mémoire
    lectures·re + écritures·we + fuite·temps ; énergie calcul ops·ie + fuite·temps."""
    runtime = div(cycles, metric(SocUnit.SOC, Metric.FREQUENCY))
    leak_time = mul(runtime, Const(LEAK_TO_NJ))

    energy_by_unit: Dict[Unit, Expr] = {}
    dynamic_by_unit: Dict[Unit, Expr] = {}
    area_by_unit: Dict[Unit, Expr] = {}
    for m, st in r.memory.items():
        dyn = add(
            mul(Const(st.n_reads), metric(m, Metric.READ_ENERGY)),
            mul(Const(st.n_writes), metric(m, Metric.WRITE_ENERGY)),
        )
        dynamic_by_unit[m] = dyn
        energy_by_unit[m] = add(dyn, mul(metric(m, Metric.LEAKAGE_POWER), leak_time))
        area_by_unit[m] = metric(m, Metric.AREA)
    for u, st in r.compute.items():
        dyn = mul(Const(st.n_ops), metric(u, Metric.INT_ENERGY))
        dynamic_by_unit[u] = dyn
        energy_by_unit[u] = add(dyn, mul(metric(u, Metric.LEAKAGE_POWER), leak_time))
        area_by_unit[u] = metric(u, Metric.AREA)

    energy = fold_sum(energy_by_unit.values())
    area = fold_sum(area_by_unit.values())
    power = div(mul(energy, Const(NJ_TO_J)), runtime) if r.total_cycles > 0 else ZERO
    return SymbolicEstimate(cycles, runtime, leak_time, energy, power, area, energy_by_unit, dynamic_by_unit, area_by_unit)


def concrete_metric(c: ConcreteHardwareModel) -> MetricFn:
    def metric(unit: Unit, q: Metric) -> Expr:
        return Const(c.lookup(unit, q))

    return metric


def estimate(r: MapResult, c: ConcreteHardwareModel) -> PerfEstimate:
    return build_estimate(r, concrete_metric(c), Const(r.total_cycles)).evaluate({})


def estimate_symbolic(r: MapResult, h: HardwareModel) -> SymbolicEstimate:
    return build_estimate(r, h.expr, symbolic_cycles(r, h.expr))


def metric_symbol(unit: Unit, q: Metric) -> Param:
    """Symbole libre `unit.metric` représentant une métrique du modèle."""
    return Param(ParamId(metric_key(unit, q)))


def estimate_over_metrics(r: MapResult) -> SymbolicEstimate:
    """Estimation dont chaque métrique matérielle est un symbole libre."""
    return build_estimate(r, metric_symbol, symbolic_cycles(r, metric_symbol))


TIME_SYMBOL = "t_W"


def tmec(r: MapResult, c: ConcreteHardwareModel) -> float:
    """Énergie totale des mémoires : Σ_m (rw·er + ww·ew + l·t_W)."""
    est = estimate(r, c)
    return est.memory_energy


def tmec_expr(r: MapResult, with_compute_leakage: bool = True) -> Expr:
    """TMEC sur symboles libres ; t_W est le temps de fuite (mW → nJ)."""
    t_w = Param(ParamId(TIME_SYMBOL))
    terms: List[Expr] = []
    for m, st in r.memory.items():
        terms.append(
            add(
                add(
                    mul(Const(st.n_reads), metric_symbol(m, Metric.READ_ENERGY)),
                    mul(Const(st.n_writes), metric_symbol(m, Metric.WRITE_ENERGY)),
                ),
                mul(metric_symbol(m, Metric.LEAKAGE_POWER), t_w),
            )
        )
    if with_compute_leakage and r.compute:
        l_c = fold_sum(metric_symbol(u, Metric.LEAKAGE_POWER) for u in r.compute)
        terms.append(mul(l_c, t_w))
    return fold_sum(terms)


def tmec_partials(r: MapResult) -> Dict[str, Expr]:
    """Dérivées exactes de TMEC : ∂/∂ew = ww, ∂/∂er = rw, ∂/∂l = t_W, ∂/∂t_W = Σl + l_C."""
    e = tmec_expr(r)
    names = [metric_key(m, q) for m in r.memory for q in (Metric.READ_ENERGY, Metric.WRITE_ENERGY, Metric.LEAKAGE_POWER)]
    names.append(TIME_SYMBOL)
    return {name: diff(e, name) for name in names}
