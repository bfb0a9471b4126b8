"""Passe avant : placement d'un workload ordonné sur un modèle concret."""
from __future__ import annotations

import logging
import math
from collections import deque
from typing import Deque, Dict, List, Mapping, Optional, Set, Tuple

from diffhw.errors import InfeasibleVertex, MapperInvariantError, Unsplittable, ValidationError
from diffhw.hwmodel import CompUnit, ConcreteHardwareModel, MemUnit, Metric
from diffhw.mapper.config import MapperConfig
from diffhw.mapper.state import ComputeState, ExecRecord, MapResult, MemoryState
from diffhw.workload import Vertex, Workload, default_hvth, split_vertex, workload_optimize

logger = logging.getLogger(__name__)

ALLOC_PREFERENCE = (MemUnit.GLOBAL_BUF, MemUnit.LOCAL_MEM, MemUnit.MAIN_MEM)
MEM_FALLBACK: Dict[MemUnit, Tuple[MemUnit, ...]] = {
    MemUnit.LOCAL_MEM: (MemUnit.GLOBAL_BUF, MemUnit.MAIN_MEM),
    MemUnit.GLOBAL_BUF: (MemUnit.MAIN_MEM, MemUnit.LOCAL_MEM),
    MemUnit.MAIN_MEM: (MemUnit.GLOBAL_BUF, MemUnit.LOCAL_MEM),
}

PREFETCH_SKIP = "skip"
PREFETCH_STREAM = "stream"
PREFETCH_FETCH = "prefetch"
PREFETCH_NONE = "none"


def ceil_div(n: int, rate: float) -> float:
    """⌈n / rate⌉ en flottant, exactement comme l'expression ceil(div(n, rate))."""
    if n == 0:
        return 0.0
    return float(math.ceil(n / rate))


def alloc_level(c: ConcreteHardwareModel) -> Optional[MemUnit]:
    present = c.mem_units
    for m in ALLOC_PREFERENCE:
        if m in present:
            return m
    return None


def resolve_comp(c: ConcreteHardwareModel, u: CompUnit) -> CompUnit:
    present = c.comp_units
    if u in present:
        return u
    if not present:
        raise ValidationError("aucune unité de calcul dans le modèle")
    return present[0]


def resolve_mem(c: ConcreteHardwareModel, m: MemUnit) -> MemUnit:
    present = c.mem_units
    if m in present:
        return m
    for alt in MEM_FALLBACK[m]:
        if alt in present:
            return alt
    raise ValidationError("aucune unité mémoire dans le modèle")


def map_to_compute(
    c: ConcreteHardwareModel,
    cs: Dict[CompUnit, ComputeState],
    n_comp: Mapping[CompUnit, int],
) -> Tuple[float, Dict[CompUnit, float], Dict[CompUnit, int]]:
    """Exécute nComp opérations ; retourne (t_c, t_c par unité, opérations par unité)."""
    used: Dict[CompUnit, int] = {}
    for u, ops in n_comp.items():
        if ops:
            target = resolve_comp(c, u)
            used[target] = used.get(target, 0) + ops
    used = {u: used[u] for u in CompUnit if u in used}
    per_unit: Dict[CompUnit, float] = {}
    t_c = 0.0
    for u, ops in used.items():
        t = ceil_div(ops, c.lookup(u, Metric.THROUGHPUT))
        per_unit[u] = t
        t_c += t
        st = cs[u]
        st.n_ops += ops
        if u is CompUnit.SYSTOLIC_ARRAY:
            x = int(c.arch_value("sysArrX", c.lookup(u, Metric.THROUGHPUT)))
            y = int(c.arch_value("sysArrY", 1))
            st.rows = min(ops, x)
            st.cols = min(math.ceil(ops / x), y)
        else:
            st.rows = min(ops, int(c.lookup(u, Metric.THROUGHPUT)))
            st.cols = 0
    return t_c, per_unit, used


def map_mem_acc(
    c: ConcreteHardwareModel,
    ms: Dict[MemUnit, MemoryState],
    n_read: Mapping[MemUnit, int],
    n_write: Mapping[MemUnit, int],
) -> Tuple[Dict[MemUnit, float], Dict[MemUnit, int], Dict[MemUnit, int]]:
    """Comptabilise lectures / écritures ; t_mem[m] = ⌈octets / bande passante⌉."""
    reads: Dict[MemUnit, int] = {}
    writes: Dict[MemUnit, int] = {}
    for m, n in n_read.items():
        if n:
            t = resolve_mem(c, m)
            reads[t] = reads.get(t, 0) + n
    for m, n in n_write.items():
        if n:
            t = resolve_mem(c, m)
            writes[t] = writes.get(t, 0) + n
    t_mem: Dict[MemUnit, float] = {}
    for m in MemUnit:
        nbytes = reads.get(m, 0) + writes.get(m, 0)
        if not nbytes:
            continue
        ms[m].n_reads += reads.get(m, 0)
        ms[m].n_writes += writes.get(m, 0)
        t_mem[m] = ceil_div(nbytes, c.lookup(m, Metric.BANDWIDTH))
    reads = {m: reads[m] for m in MemUnit if m in reads}
    writes = {m: writes[m] for m in MemUnit if m in writes}
    return t_mem, reads, writes


def has_space(c: ConcreteHardwareModel, ms: Dict[MemUnit, MemoryState], level: MemUnit, n: int) -> bool:
    return ms[level].capacity_used + n <= c.lookup(level, Metric.CAPACITY)


def _check_capacity(c: ConcreteHardwareModel, ms: Dict[MemUnit, MemoryState], level: MemUnit) -> None:
    cap = c.lookup(level, Metric.CAPACITY)
    used = ms[level].capacity_used
    if used < 0 or used > cap:
        raise MapperInvariantError(f"{level.value}: capacité utilisée {used} hors [0, {cap:g}]")


def mem_alloc(
    c: ConcreteHardwareModel,
    ms: Dict[MemUnit, MemoryState],
    level: MemUnit,
    n: int,
    completed: Deque[Tuple[str, int]],
) -> List[str]:
    """Alloue n octets, en libérant d'abord les plus anciennes allocations terminées."""
    evicted: List[str] = []
    while not has_space(c, ms, level, n) and completed:
        vid, nbytes = completed.popleft()
        ms[level].capacity_used -= nbytes
        evicted.append(vid)
    ms[level].capacity_used += n
    _check_capacity(c, ms, level)
    return evicted


def prefetch(
    c: ConcreteHardwareModel,
    ms: Dict[MemUnit, MemoryState],
    level: MemUnit,
    nxt: Vertex,
    cfg: MapperConfig,
) -> str:
    """Politique de préchargement du sommet suivant sur le niveau d'allocation.

    skip si la bande passante est saturée, stream si la capacité l'est,
    sinon préallocation si la place suffit.
    """
    st = ms[level]
    if st.bw_used > cfg.prefetch_bw_threshold * c.lookup(level, Metric.BANDWIDTH):
        return PREFETCH_SKIP
    if st.capacity_used > cfg.prefetch_capacity_threshold * c.lookup(level, Metric.CAPACITY):
        return PREFETCH_STREAM
    if has_space(c, ms, level, nxt.stats.alloc):
        st.capacity_used += nxt.stats.alloc
        _check_capacity(c, ms, level)
        return PREFETCH_FETCH
    return PREFETCH_NONE


class Mapper:
    """État d'une exécution : mémoire, calcul, allocations et enregistrements."""

    def __init__(self, c: ConcreteHardwareModel, cfg: Optional[MapperConfig] = None):
        self.c = c
        self.cfg = cfg or MapperConfig()
        self.level = alloc_level(c)
        self.stream_level = resolve_mem(c, MemUnit.MAIN_MEM) if c.mem_units else None
        self.ms: Dict[MemUnit, MemoryState] = {m: MemoryState() for m in c.mem_units}
        self.cs: Dict[CompUnit, ComputeState] = {u: ComputeState() for u in c.comp_units}
        self.completed: Deque[Tuple[str, int]] = deque()
        self.pinned: Dict[str, int] = {}
        self.streamed: Set[str] = set()
        self.records: List[ExecRecord] = []
        self.cycles = 0.0

    def _capacity(self) -> float:
        return self.c.lookup(self.level, Metric.CAPACITY) if self.level else 0.0

    def map_vertex(self, v: Vertex, depth: int = 0, split: bool = False) -> None:
        """Découpe (streaming) tant que l'allocation ne tient pas, puis exécute."""
        alloc = v.stats.alloc
        if alloc:
            if self.level is None:
                raise InfeasibleVertex(f"{v.id}: aucune mémoire pour allouer {alloc} octets")
            free = self._capacity() - sum(b for vid, b in self.pinned.items() if vid != v.id)
            if alloc > free:
                if depth >= self.cfg.max_split_depth:
                    raise InfeasibleVertex(f"{v.id}: {alloc} octets ne tiennent pas après {depth} découpes")
                try:
                    first, second = split_vertex(v)
                except Unsplittable as exc:
                    raise InfeasibleVertex(str(exc)) from None
                logger.debug(f"Découpe de {v.id} ({alloc} octets > {free:g} libres)")
                self.map_vertex(first, depth + 1, True)
                self.map_vertex(second, depth + 1, True)
                return
        self._execute(v, split)

    def _execute(self, v: Vertex, split: bool) -> None:
        c, s = self.c, v.stats
        prev_t_c = self.records[-1].t_c if self.records else 0.0
        prefetched = v.id in self.pinned
        t_c, t_c_unit, comp = map_to_compute(c, self.cs, s.comp)
        if prefetched:
            self.pinned.pop(v.id)
        elif s.alloc:
            mem_alloc(c, self.ms, self.level, s.alloc, self.completed)
        t_mem, read, write = map_mem_acc(c, self.ms, s.read, s.write)

        stream_bytes = s.alloc if split else 0
        t_stream = ceil_div(stream_bytes, c.lookup(self.stream_level, Metric.BANDWIDTH)) if stream_bytes else 0.0
        if self.cfg.overlap:
            t_exec = max([t_c, *t_mem.values()]) + t_stream
        else:
            t_exec = t_c
            for t in t_mem.values():
                t_exec += t
            t_exec += t_stream
        # t_min : plus petit terme non nul parmi t_c et t_mem (terme nul = unité inactive)
        active = [t for t in (t_c, *t_mem.values()) if t > 0]
        t_min = min(active) if active else 0.0
        t_mem_max = max(t_mem.values(), default=0.0)
        credit = min(t_mem_max, prev_t_c) if prefetched else 0.0

        for m, st in self.ms.items():
            nbytes = read.get(m, 0) + write.get(m, 0)
            st.bw_used = nbytes / t_exec if t_exec > 0 and nbytes else 0.0
        if s.alloc:
            self.completed.append((v.id, s.alloc))

        self.records.append(
            ExecRecord(
                vertex_id=v.id,
                t_c=t_c,
                t_c_unit=t_c_unit,
                t_mem=t_mem,
                t_stream=t_stream,
                t_exec=t_exec,
                t_min=t_min,
                comp=comp,
                read=read,
                write=write,
                alloc=s.alloc,
                stream_bytes=stream_bytes,
                split=split,
                prefetched=prefetched,
                streamed=v.id in self.streamed,
                overlap=credit,
                prev_t_c=prev_t_c,
            )
        )
        self.cycles += t_exec - credit

    def prefetch_next(self, nxt: Vertex) -> str:
        if self.level is None:
            return PREFETCH_NONE
        outcome = prefetch(self.c, self.ms, self.level, nxt, self.cfg)
        if outcome == PREFETCH_FETCH:
            self.pinned[nxt.id] = nxt.stats.alloc
        elif outcome == PREFETCH_STREAM:
            self.streamed.add(nxt.id)
        return outcome

    def result(self) -> MapResult:
        return MapResult(
            total_cycles=self.cycles,
            memory=self.ms,
            compute=self.cs,
            records=self.records,
            overlap=self.cfg.overlap,
            alloc_level=self.level or MemUnit.MAIN_MEM,
            stream_level=self.stream_level or MemUnit.MAIN_MEM,
        )


def map_workload(w: Workload, c: ConcreteHardwareModel, cfg: Optional[MapperConfig] = None) -> MapResult:
    """Ordonne le workload (fusion + tri topologique) puis place chaque sommet."""
    cfg = cfg or MapperConfig()
    hvth = cfg.hvth if cfg.hvth is not None else default_hvth(c)
    order, _ = workload_optimize(w, hvth)
    mapper = Mapper(c, cfg)
    for i, v in enumerate(order):
        mapper.map_vertex(v)
        if cfg.prefetch and i + 1 < len(order):
            mapper.prefetch_next(order[i + 1])
    result = mapper.result()
    logger.debug(f"Placement: {len(order)} sommets, {len(result.records)} exécutions, {result.total_cycles:g} cycles")
    return result
