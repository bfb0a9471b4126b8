"""Graphe de flot de données : sommets, statistiques, arêtes."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from diffhw.errors import CycleDetected, Unsplittable, ValidationError
from diffhw.hwmodel import CompUnit, MemUnit

Edge = Tuple[str, str, int]


def _add_maps(a: Mapping, b: Mapping) -> Dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


@dataclass(frozen=True)
class VertexStats:
    """Opérations par unité de calcul, octets lus / écrits par niveau, octets alloués."""

    comp: Dict[CompUnit, int] = field(default_factory=dict)
    read: Dict[MemUnit, int] = field(default_factory=dict)
    write: Dict[MemUnit, int] = field(default_factory=dict)
    alloc: int = 0

    def __post_init__(self) -> None:
        values = [*self.comp.values(), *self.read.values(), *self.write.values(), self.alloc]
        if any(v < 0 for v in values):
            raise ValidationError("statistiques négatives")
        # Ordre canonique des clés : ordre des énumérations
        object.__setattr__(self, "comp", {u: int(self.comp[u]) for u in CompUnit if u in self.comp})
        object.__setattr__(self, "read", {m: int(self.read[m]) for m in MemUnit if m in self.read})
        object.__setattr__(self, "write", {m: int(self.write[m]) for m in MemUnit if m in self.write})
        object.__setattr__(self, "alloc", int(self.alloc))

    @property
    def total_comp(self) -> int:
        return sum(self.comp.values())

    @property
    def total_read(self) -> int:
        return sum(self.read.values())

    @property
    def total_write(self) -> int:
        return sum(self.write.values())

    def is_empty(self) -> bool:
        return self.total_comp == 0 and self.total_read == 0 and self.total_write == 0 and self.alloc == 0

    def __add__(self, other: "VertexStats") -> "VertexStats":
        return VertexStats(
            _add_maps(self.comp, other.comp),
            _add_maps(self.read, other.read),
            _add_maps(self.write, other.write),
            self.alloc + other.alloc,
        )

    def halves(self) -> Tuple["VertexStats", "VertexStats"]:
        """Moitiés de chaque statistique ; la première reçoit l'unité impaire."""

        def first(x: int) -> int:
            return x - x // 2

        a = VertexStats(
            {k: first(v) for k, v in self.comp.items()},
            {k: first(v) for k, v in self.read.items()},
            {k: first(v) for k, v in self.write.items()},
            first(self.alloc),
        )
        b = VertexStats(
            {k: v // 2 for k, v in self.comp.items()},
            {k: v // 2 for k, v in self.read.items()},
            {k: v // 2 for k, v in self.write.items()},
            self.alloc // 2,
        )
        return a, b

    @staticmethod
    def total(items: Iterable["VertexStats"]) -> "VertexStats":
        acc = VertexStats()
        for s in items:
            acc = acc + s
        return acc


@dataclass(frozen=True)
class Vertex:
    id: str
    stats: VertexStats
    kind: str = "op"
    loops: Optional[Dict[str, int]] = None


def split_vertex(v: Vertex) -> Tuple[Vertex, Vertex]:
    """Coupe un sommet en deux moitiés `id/0` et `id/1`."""
    s = v.stats
    values = [*s.comp.values(), *s.read.values(), *s.write.values(), s.alloc]
    if all(x <= 1 for x in values):
        raise Unsplittable(f"sommet {v.id} indivisible (toutes les statistiques <= 1)")
    a, b = s.halves()
    return Vertex(f"{v.id}/0", a, v.kind, v.loops), Vertex(f"{v.id}/1", b, v.kind, v.loops)


@dataclass(frozen=True)
class Workload:
    vertices: Tuple[Vertex, ...] = ()
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((s, d, int(b)) for s, d, b in self.edges))
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError("identifiants de sommets dupliqués", missing=dup)
        known = set(ids)
        seen: set[Tuple[str, str]] = set()
        for src, dst, nbytes in self.edges:
            if src not in known or dst not in known:
                raise ValidationError(f"arête vers un sommet inconnu: {src} -> {dst}")
            if (src, dst) in seen:
                raise ValidationError(f"arête dupliquée: {src} -> {dst}")
            if nbytes < 0:
                raise ValidationError(f"arête de taille négative: {src} -> {dst}")
            seen.add((src, dst))
        try:
            cycle = nx.find_cycle(self.graph)
        except nx.NetworkXNoCycle:
            return
        raise CycleDetected([u for u, _ in cycle] + [cycle[0][0]])

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for v in self.vertices:
            g.add_node(v.id)
        for src, dst, nbytes in self.edges:
            g.add_edge(src, dst, bytes=nbytes)
        return g

    @cached_property
    def _index(self) -> Dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @property
    def ids(self) -> List[str]:
        return [v.id for v in self.vertices]

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._index[vid]
        except KeyError:
            raise ValidationError(f"sommet inconnu: {vid}") from None

    def __len__(self) -> int:
        return len(self.vertices)

    def totals(self) -> VertexStats:
        return VertexStats.total(v.stats for v in self.vertices)

    def split(self, vid: str) -> "Workload":
        """Remplace un sommet par ses moitiés : entrées vers la première,
        sorties depuis la seconde, et une arête première → seconde."""
        v = self.vertex(vid)
        first, second = split_vertex(v)
        vertices: List[Vertex] = []
        for u in self.vertices:
            vertices.extend((first, second) if u.id == vid else (u,))
        edges: List[Edge] = []
        for src, dst, nbytes in self.edges:
            if dst == vid:
                edges.append((src, first.id, nbytes))
            elif src == vid:
                edges.append((second.id, dst, nbytes))
            else:
                edges.append((src, dst, nbytes))
        edges.append((first.id, second.id, first.stats.alloc))
        return Workload(tuple(vertices), tuple(edges))

    def concat(self, other: "Workload", suffix: str = "~2") -> "Workload":
        """Composition dos à dos : chaque puits de self précède chaque source de other."""
        taken = set(self.ids)
        rename = {vid: (vid + suffix if vid in taken else vid) for vid in other.ids}
        moved = [Vertex(rename[v.id], v.stats, v.kind, v.loops) for v in other.vertices]
        edges = list(self.edges) + [(rename[s], rename[d], b) for s, d, b in other.edges]
        sinks = [vid for vid in self.ids if self.graph.out_degree(vid) == 0]
        sources = [rename[vid] for vid in other.ids if other.graph.in_degree(vid) == 0]
        edges += [(s, d, 0) for s in sinks for d in sources]
        return Workload(self.vertices + tuple(moved), tuple(edges))
