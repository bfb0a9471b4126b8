"""Passe arrière : gradients par unité puis par paramètre via le graphe biparti."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

import networkx as nx
import pandas as pd

from diffhw.dopt.schemas import Objective
from diffhw.dsim import estimate_over_metrics
from diffhw.expr import Expr, diff, evaluate
from diffhw.hwmodel import (
    ConcreteHardwareModel,
    HardwareModel,
    MemUnit,
    Metric,
    SocUnit,
    Unit,
    metric_key,
    specialize,
)
from diffhw.mapper import MapResult

logger = logging.getLogger(__name__)

MetricKey = Tuple[Unit, Metric]


class BipartiteGraph:
    """Paramètres ↔ (unité, métrique) ; poids = ∂h(u, q)/∂p (expression).

    Une arête existe si et seulement si le paramètre apparaît dans
    l'expression de la métrique.
    """

    def __init__(self, graph: nx.Graph):
        self.graph = graph

    @classmethod
    def from_model(cls, h: HardwareModel) -> "BipartiteGraph":
        g = nx.Graph()
        g.add_nodes_from(h.param_table, bipartite=0)
        for key, e in h.entries.items():
            g.add_node(key, bipartite=1)
            for name in sorted(e.params):
                g.add_edge(name, key, weight=diff(e, name))
        logger.debug(f"Graphe biparti: {len(h.param_table)} paramètres, {g.number_of_edges()} arêtes")
        return cls(g)

    @property
    def params(self) -> List[str]:
        return [n for n, d in self.graph.nodes(data=True) if d["bipartite"] == 0]

    def metrics_of(self, name: str) -> List[MetricKey]:
        if name not in self.graph:
            return []
        return list(self.graph.neighbors(name))

    def weight(self, name: str, key: MetricKey) -> Expr:
        return self.graph.edges[name, key]["weight"]

    def units_of(self, name: str) -> Set[Unit]:
        return {u for u, _ in self.metrics_of(name)}

    def only_soc(self, name: str) -> bool:
        units = self.units_of(name)
        return bool(units) and all(isinstance(u, SocUnit) for u in units)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"param": name, "unit": key[0].value, "metric": key[1].value}
            for name in self.params
            for key in self.metrics_of(name)
        ]
        return pd.DataFrame(rows, columns=["param", "unit", "metric"])


@dataclass
class GradientAccumulator:
    t_grad: Dict[Unit, float] = field(default_factory=dict)
    e_grad: Dict[Unit, float] = field(default_factory=dict)
    metric_grad: Dict[str, float] = field(default_factory=dict)
    g: Dict[str, float] = field(default_factory=dict)
    area_grad: Dict[str, float] = field(default_factory=dict)
    figure: float = 0.0
    area: float = 0.0
    objective: float = 0.0

    def add_time(self, unit: Unit, value: float) -> None:
        self.t_grad[unit] = self.t_grad.get(unit, 0.0) + value

    def add_energy(self, unit: Unit, value: float) -> None:
        self.e_grad[unit] = self.e_grad.get(unit, 0.0) + value


def accumulate_schedule(r: MapResult, c: ConcreteHardwareModel, acc: GradientAccumulator) -> None:
    """T_grad[u] += t_min − t_u ; E_grad[u] += énergie dynamique du sommet."""
    for u in r.memory:
        acc.t_grad.setdefault(u, 0.0)
        acc.e_grad.setdefault(u, 0.0)
    for u in r.compute:
        acc.t_grad.setdefault(u, 0.0)
        acc.e_grad.setdefault(u, 0.0)
    for rec in r.records:
        for m, t in rec.t_mem.items():
            acc.add_time(m, rec.t_min - t)
        for u in rec.t_c_unit:
            acc.add_time(u, rec.t_min - rec.t_c)
        for m in rec.t_mem:
            acc.add_energy(
                m,
                rec.read.get(m, 0) * c.lookup(m, Metric.READ_ENERGY)
                + rec.write.get(m, 0) * c.lookup(m, Metric.WRITE_ENERGY),
            )
        for u, ops in rec.comp.items():
            acc.add_energy(u, ops * c.lookup(u, Metric.INT_ENERGY))


def backward_pass(
    r: MapResult,
    h: HardwareModel,
    assigns: Mapping[str, float],
    obj: Objective,
    graph: Optional[BipartiteGraph] = None,
    c: Optional[ConcreteHardwareModel] = None,
) -> GradientAccumulator:
    """Gradients de l'objectif pénalisé par rapport à chaque paramètre de H.

    g[p] = Σ_(u,q) ∂obj/∂h(u,q) · ∂h(u,q)/∂p, le premier facteur venant de
    l'estimation reconstruite sur des symboles de métriques.
    """
    graph = graph or BipartiteGraph.from_model(h)
    if c is None:
        c = specialize(h, *h.split_assignment(assigns))
    acc = GradientAccumulator()
    accumulate_schedule(r, c, acc)

    sym = estimate_over_metrics(r)
    figure = obj.figure_expr(sym.runtime, sym.energy)
    penalized = obj.expr(figure, sym.area)
    at = {metric_key(u, q): v for (u, q), v in c.values.items()}
    acc.figure = evaluate(figure, at)
    acc.area = evaluate(sym.area, at)
    acc.objective = evaluate(penalized, at)
    for name in sorted(penalized.params):
        value = evaluate(diff(penalized, name), at)
        if value:
            acc.metric_grad[name] = value

    for name in graph.params:
        g = 0.0
        da = 0.0
        for key in graph.metrics_of(name):
            unit, q = key
            local = evaluate(graph.weight(name, key), assigns)
            g += acc.metric_grad.get(metric_key(unit, q), 0.0) * local
            if q is Metric.AREA:
                da += local
        acc.g[name] = g
        acc.area_grad[name] = da
    mem_bound = sum(v for u, v in acc.t_grad.items() if isinstance(u, MemUnit))
    logger.debug(f"Passe arrière: objectif {acc.objective:g}, T_grad mémoire {mem_bound:g}")
    return acc
