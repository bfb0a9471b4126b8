"""Pipeline: génération du modèle matériel H (dgen)."""
from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Mapping, Optional, Union

from diffhw.dgen import generate, save_model
from diffhw.hwmodel import HardwareModel, concrete_to_frame, render_concrete, specialize
from diffhw.utils.io import save_data

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def run(
    arch_path: PathLike,
    tech_path: PathLike,
    model_path: Optional[PathLike] = None,
    devices: Optional[PathLike] = None,
    templates: Optional[PathLike] = None,
    overrides: Optional[Mapping[str, float]] = None,
    report_path: Optional[PathLike] = None,
) -> HardwareModel:
    """
    Pipeline de génération du modèle.

    Args:
        arch_path: Fichier d'architecture (unités, capacités, ports)
        tech_path: Fichier de paramètres technologiques
        model_path: Fichier modèle de sortie (.hw)
        devices: Table de référence des composants (défaut : 40nm embarquée)
        templates: Bibliothèque de templates d'accélérateurs
        overrides: Valeurs de départ imposées (name → valeur)
        report_path: Rapport des métriques aux valeurs de départ (texte, ou CSV si `.csv`)
    """
    logger.info(f"Génération du modèle depuis {arch_path} et {tech_path}")
    h = generate(arch_path, tech_path, devices, templates)
    if overrides:
        h = h.with_overrides(overrides)
    logger.info(f"Modèle: {len(h.entries)} métriques, {len(h.param_table)} paramètres")

    if model_path:
        save_model(h, model_path)
        logger.info(f"Modèle sauvegardé: {model_path}")
    if report_path:
        c = specialize(h, *h.seed_assignment())
        report = concrete_to_frame(c) if Path(report_path).suffix == ".csv" else render_concrete(c)
        save_data(report, report_path)
        logger.info(f"Rapport des métriques: {report_path}")
    return h


def main() -> None:
    from diffhw.cli import main as cli_main

    raise SystemExit(cli_main(["dgen", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
