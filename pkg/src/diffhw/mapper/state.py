"""Variables d'état du mapper et enregistrements d'exécution."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from diffhw.hwmodel import CompUnit, MemUnit


@dataclass
class MemoryState:
    capacity_used: int = 0
    bw_used: float = 0.0
    n_reads: int = 0
    n_writes: int = 0


@dataclass
class ComputeState:
    n_ops: int = 0
    rows: int = 0
    cols: int = 0


@dataclass(frozen=True)
class ExecRecord:
    """Trace d'un sommet exécuté (après fusion / découpage).

    Les compteurs `comp`, `read`, `write` sont ceux des unités réellement
    utilisées (après repli sur les unités présentes).
    """

    vertex_id: str
    t_c: float
    t_c_unit: Dict[CompUnit, float]
    t_mem: Dict[MemUnit, float]
    t_stream: float
    t_exec: float
    t_min: float
    comp: Dict[CompUnit, int] = field(default_factory=dict)
    read: Dict[MemUnit, int] = field(default_factory=dict)
    write: Dict[MemUnit, int] = field(default_factory=dict)
    alloc: int = 0
    stream_bytes: int = 0
    split: bool = False
    prefetched: bool = False
    streamed: bool = False
    overlap: float = 0.0
    prev_t_c: float = 0.0

    def mem_bytes(self, m: MemUnit) -> int:
        return self.read.get(m, 0) + self.write.get(m, 0)

    @property
    def t_mem_max(self) -> float:
        return max(self.t_mem.values(), default=0.0)


@dataclass
class MapResult:
    total_cycles: float
    memory: Dict[MemUnit, MemoryState]
    compute: Dict[CompUnit, ComputeState]
    records: List[ExecRecord]
    overlap: bool = True
    alloc_level: MemUnit = MemUnit.GLOBAL_BUF
    stream_level: MemUnit = MemUnit.MAIN_MEM

    @property
    def n_reads(self) -> Dict[MemUnit, int]:
        return {m: s.n_reads for m, s in self.memory.items()}

    @property
    def n_writes(self) -> Dict[MemUnit, int]:
        return {m: s.n_writes for m, s in self.memory.items()}

    @property
    def n_ops(self) -> Dict[CompUnit, int]:
        return {u: s.n_ops for u, s in self.compute.items()}
