"""Pipeline: simulation d'un workload sur un modèle (mapper + DSim)."""
from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from diffhw.dgen import load_model
from diffhw.dsim import PerfEstimate, estimate, render_report, workload_tilings, write_report
from diffhw.hwmodel import ConcreteHardwareModel, HardwareModel, specialize
from diffhw.mapper import MapperConfig, MapResult, map_workload, write_trace
from diffhw.mapper.tiling import Tiling
from diffhw.workload import Workload, load_workload

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class Simulation:
    concrete: ConcreteHardwareModel
    mapping: MapResult
    estimate: PerfEstimate
    tilings: Dict[str, Tiling]

    @property
    def report(self) -> str:
        return render_report(self.estimate, self.tilings)


def simulate(
    h: HardwareModel,
    w: Workload,
    overrides: Optional[Mapping[str, float]] = None,
    mapper_cfg: Optional[MapperConfig] = None,
) -> Simulation:
    """Spécialise H aux valeurs de départ (surchargées), place et estime."""
    if overrides:
        h = h.with_overrides(overrides)
    c = specialize(h, *h.seed_assignment())
    r = map_workload(w, c, mapper_cfg)
    return Simulation(c, r, estimate(r, c), workload_tilings(w, c))


def run(
    model_path: PathLike,
    workload_path: PathLike,
    overrides: Optional[Mapping[str, float]] = None,
    mapper_cfg: Optional[MapperConfig] = None,
    trace_path: Optional[PathLike] = None,
    report_path: Optional[PathLike] = None,
) -> Simulation:
    """
    Pipeline de simulation.

    Args:
        model_path: Modèle matériel (.hw)
        workload_path: Graphe de flot de données (.dfg)
        overrides: Valeurs de paramètres imposées
        mapper_cfg: Configuration du mapper
        trace_path: Trace CSV par sommet exécuté
        report_path: Rapport (.csv pour la répartition, sinon texte)
    """
    logger.info(f"Simulation de {workload_path} sur {model_path}")
    h = load_model(model_path)
    w = load_workload(workload_path)
    logger.info(f"Workload: {len(w)} sommets, {len(w.edges)} arêtes")

    sim = simulate(h, w, overrides, mapper_cfg)
    est = sim.estimate
    logger.info(
        f"Résultat: {est.cycles:g} cycles, runtime {est.runtime:g} s, "
        f"énergie {est.energy:g} nJ, surface {est.area:g} mm2"
    )
    if trace_path:
        write_trace(sim.mapping, trace_path)
        logger.info(f"Trace sauvegardée: {trace_path}")
    if report_path:
        write_report(est, report_path, sim.tilings)
        logger.info(f"Rapport sauvegardé: {report_path}")
    return sim


def main() -> None:
    from diffhw.cli import main as cli_main

    raise SystemExit(cli_main(["dsim", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
