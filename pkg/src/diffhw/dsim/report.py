"""Rapports DSim : texte clé = valeur et CSV de répartition par unité."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

import pandas as pd

from diffhw.errors import ValidationError
from diffhw.dsim.estimate import PerfEstimate
from diffhw.hwmodel import ConcreteHardwareModel
from diffhw.mapper import tiling_search
from diffhw.mapper.tiling import Tiling
from diffhw.utils.io import format_float, save_data
from diffhw.workload import Workload

logger = logging.getLogger(__name__)

TOTALS = (("runtime", "s"), ("energy", "nJ"), ("power", "W"), ("area", "mm2"), ("cycles", "cycles"))


def workload_tilings(w: Workload, c: ConcreteHardwareModel) -> Dict[str, Tiling]:
    """Découpage retenu pour chaque sommet portant des étendues de boucles."""
    tilings: Dict[str, Tiling] = {}
    for v in w.vertices:
        if not v.loops:
            continue
        try:
            tilings[v.id] = tiling_search(v, c)
        except ValidationError as exc:
            logger.warning(f"Pas de découpage pour {v.id}: {exc}")
    return tilings


def render_report(est: PerfEstimate, tilings: Optional[Mapping[str, Tiling]] = None) -> str:
    lines = [f"{name} = {format_float(getattr(est, name))} # {units}" for name, units in TOTALS]
    lines.append(f"edp = {format_float(est.edp)} # nJ.s")
    lines.append("")
    lines.append("[energy]")
    for u, e in est.energy_by_unit.items():
        lines.append(f"{u.value} = {format_float(e)} # nJ (dynamique {format_float(est.dynamic_by_unit[u])})")
    lines.append("")
    lines.append("[area]")
    for u, a in est.area_by_unit.items():
        lines.append(f"{u.value} = {format_float(a)} # mm2")
    if tilings:
        lines.append("")
        lines.append("[tiling]")
        for vid, (x, y, c, k) in tilings.items():
            lines.append(f"{vid} = x:{x},y:{y},c:{c},k:{k}")
    return "\n".join(lines) + "\n"


def report_frame(est: PerfEstimate, tilings: Optional[Mapping[str, Tiling]] = None) -> pd.DataFrame:
    """Une ligne par (composant, grandeur) ; composant `total` pour les agrégats."""
    rows = [{"component": "total", "quantity": name, "value": getattr(est, name), "units": units} for name, units in TOTALS]
    rows.append({"component": "total", "quantity": "edp", "value": est.edp, "units": "nJ.s"})
    for u, e in est.energy_by_unit.items():
        rows.append({"component": u.value, "quantity": "energy", "value": e, "units": "nJ"})
        rows.append({"component": u.value, "quantity": "dynamicEnergy", "value": est.dynamic_by_unit[u], "units": "nJ"})
    for u, a in est.area_by_unit.items():
        rows.append({"component": u.value, "quantity": "area", "value": a, "units": "mm2"})
    for vid, tiling in (tilings or {}).items():
        for dim, value in zip("xyck", tiling):
            rows.append({"component": vid, "quantity": f"tile_{dim}", "value": float(value), "units": "elements"})
    return pd.DataFrame(rows, columns=["component", "quantity", "value", "units"])


def write_report(
    est: PerfEstimate,
    path: Union[str, Path],
    tilings: Optional[Mapping[str, Tiling]] = None,
) -> Path:
    """`.csv` → répartition machine ; autre extension → rapport texte."""
    path = Path(path)
    if path.suffix == ".csv":
        return save_data(report_frame(est, tilings), path)
    return save_data(render_report(est, tilings), path)
