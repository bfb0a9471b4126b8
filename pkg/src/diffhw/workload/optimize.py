"""Optimisations au niveau du graphe : fusion de petits sommets parallèles, ordre de visite."""
from __future__ import annotations

import logging
from typing import Dict, List, Sequence, Tuple

import networkx as nx

from diffhw.hwmodel import ConcreteHardwareModel, Metric
from diffhw.workload.graph import Edge, Vertex, VertexStats, Workload

logger = logging.getLogger(__name__)

SINGLETON = -1


def default_hvth(c: ConcreteHardwareModel) -> float:
    """Seuil de fusion : 1/100 du débit crête par cycle × 1000 cycles."""
    peak = sum(c.lookup(u, Metric.THROUGHPUT) for u in c.comp_units)
    return peak / 100.0 * 1000.0


def _partitions(w: Workload) -> Dict[str, int]:
    """Composantes connexes du graphe non orienté privé de ses ponts.

    Les composantes réduites à un sommet partagent la clé SINGLETON.
    """
    und = w.graph.to_undirected()
    und.remove_edges_from(list(nx.bridges(und)))
    position = {vid: i for i, vid in enumerate(w.ids)}
    key: Dict[str, int] = {}
    for comp in nx.connected_components(und):
        members = sorted(comp, key=position.__getitem__)
        label = SINGLETON if len(members) == 1 else position[members[0]]
        for vid in members:
            key[vid] = label
    return key


def _merge(batch: Sequence[Vertex]) -> Vertex:
    kinds = {v.kind for v in batch}
    return Vertex(
        "+".join(v.id for v in batch),
        VertexStats.total(v.stats for v in batch),
        kinds.pop() if len(kinds) == 1 else "merged",
        None,
    )


def compute_merge(w: Workload, hvth: float) -> Workload:
    """Fusionne les ensembles de sommets parallèles dont le calcul est petit.

    Candidats : même génération topologique et même partition (coupure aux
    ponts). Chaque sommet et la somme du lot restent strictement sous hvth.
    """
    if hvth <= 0 or len(w) < 2:
        return w
    part = _partitions(w)
    groups: Dict[Tuple[int, int], List[Vertex]] = {}
    for level, ids in enumerate(nx.topological_generations(w.graph)):
        for vid in ids:
            groups.setdefault((level, part[vid]), []).append(w.vertex(vid))

    target: Dict[str, str] = {}
    merged: Dict[str, Vertex] = {}
    for key in sorted(groups):
        batch: List[Vertex] = []
        running = 0
        for v in sorted(groups[key], key=lambda v: v.id):
            comp = v.stats.total_comp
            if comp >= hvth:
                continue
            if batch and running + comp < hvth:
                batch.append(v)
                running += comp
                continue
            if len(batch) > 1:
                m = _merge(batch)
                merged[m.id] = m
                target.update({b.id: m.id for b in batch})
            batch, running = [v], comp
        if len(batch) > 1:
            m = _merge(batch)
            merged[m.id] = m
            target.update({b.id: m.id for b in batch})

    if not merged:
        return w
    vertices: List[Vertex] = []
    placed: set[str] = set()
    for v in w.vertices:
        new_id = target.get(v.id, v.id)
        if new_id in placed:
            continue
        placed.add(new_id)
        vertices.append(merged.get(new_id, v))
    edges: Dict[Tuple[str, str], int] = {}
    for src, dst, nbytes in w.edges:
        k = (target.get(src, src), target.get(dst, dst))
        edges[k] = edges.get(k, 0) + nbytes
    logger.debug(f"Fusion: {len(w)} -> {len(vertices)} sommets (hvth={hvth:g})")
    return Workload(tuple(vertices), tuple((s, d, b) for (s, d), b in edges.items()))


def workload_optimize(w: Workload, hvth: float) -> Tuple[List[Vertex], List[Edge]]:
    """Fusion puis ordre topologique, égalités départagées par identifiant croissant."""
    merged = compute_merge(w, hvth)
    order = nx.lexicographical_topological_sort(merged.graph, key=lambda n: n)
    return [merged.vertex(vid) for vid in order], list(merged.edges)
