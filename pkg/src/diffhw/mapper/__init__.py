"""Passe avant : placement et exécution du workload sur le modèle concret."""
from diffhw.mapper.config import MapperConfig, load_mapper_config
from diffhw.mapper.core import (
    Mapper,
    alloc_level,
    ceil_div,
    has_space,
    map_mem_acc,
    map_to_compute,
    map_workload,
    mem_alloc,
    prefetch,
    resolve_comp,
    resolve_mem,
)
from diffhw.mapper.state import ComputeState, ExecRecord, MapResult, MemoryState
from diffhw.mapper.tiling import search_tiling, tile_factors, tiling_energy, tiling_grid, tiling_search
from diffhw.mapper.trace import trace_frame, write_trace

__all__ = [
    "MapperConfig", "load_mapper_config", "Mapper", "alloc_level", "ceil_div", "has_space",
    "map_mem_acc", "map_to_compute", "map_workload", "mem_alloc", "prefetch", "resolve_comp",
    "resolve_mem", "ComputeState", "ExecRecord", "MapResult", "MemoryState", "search_tiling",
    "tile_factors", "tiling_energy", "tiling_grid", "tiling_search", "trace_frame", "write_trace",
]
