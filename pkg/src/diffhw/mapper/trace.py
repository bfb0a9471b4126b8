"""Trace CSV par sommet exécuté."""
from __future__ import annotations

from pathlib import Path
from typing import Union

import pandas as pd

from diffhw.hwmodel import MemUnit
from diffhw.mapper.state import MapResult
from diffhw.utils.io import save_data


def trace_frame(r: MapResult) -> pd.DataFrame:
    levels = list(r.memory) or list(MemUnit)
    rows = []
    for rec in r.records:
        row = {"vertex": rec.vertex_id, "t_c": rec.t_c}
        row.update({f"t_mem_{m.value}": rec.t_mem.get(m, 0.0) for m in levels})
        row.update(
            {
                "t_stream": rec.t_stream,
                "t_exec": rec.t_exec,
                "t_min": rec.t_min,
                "overlap": rec.overlap,
                "prefetched": rec.prefetched,
                "streamed": rec.streamed,
                "split": rec.split,
            }
        )
        rows.append(row)
    columns = ["vertex", "t_c", *(f"t_mem_{m.value}" for m in levels), "t_stream", "t_exec", "t_min", "overlap", "prefetched", "streamed", "split"]
    return pd.DataFrame(rows, columns=columns)


def write_trace(r: MapResult, path: Union[str, Path]) -> Path:
    return save_data(trace_frame(r), path)
