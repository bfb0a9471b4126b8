"""Pipeline: balayage exhaustif d'une grille de paramètres (référence de DOpt)."""
from __future__ import annotations

import itertools
import logging
import sys
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd
from joblib import Parallel, delayed

from diffhw.dopt import DotProductConfig, Evaluation, Objective, Problem
from diffhw.errors import OutOfBounds, ValidationError
from diffhw.mapper import MapperConfig
from diffhw.pipelines.optimize_design import build_problem
from diffhw.pipelines.runconfig import check_grid_size
from diffhw.utils.io import save_data

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RESULT_COLUMNS = ["runtime", "energy", "area", "objective", "feasible"]


def _evaluate(problem: Problem, point: Mapping[str, float], obj: Objective) -> Evaluation:
    return problem.evaluate(point, obj)


def grid_points(grid: Mapping[str, Sequence[float]]) -> List[Dict[str, float]]:
    """Produit cartésien dans l'ordre de la grille (dernier axe le plus rapide)."""
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


def sweep(
    problem: Problem,
    grid: Mapping[str, Sequence[float]],
    obj: Objective,
    jobs: int = 1,
) -> pd.DataFrame:
    """Évalue chaque point ; `is_min` marque le premier minimum réalisable."""
    unknown = [n for n in grid if n not in problem.specs]
    if unknown:
        raise ValidationError("paramètres de grille inconnus", missing=unknown)
    check_grid_size(dict(grid))
    for name, axis in grid.items():
        spec = problem.specs[name]
        for v in axis:
            if not spec.contains(v):
                raise OutOfBounds(name, v, (spec.lower, spec.upper))

    points = grid_points(grid)
    logger.info(f"Balayage de {len(points)} points ({jobs} processus)")
    evaluations = Parallel(n_jobs=jobs)(delayed(_evaluate)(problem, p, obj) for p in points)

    rows = []
    for point, ev in zip(points, evaluations):
        rows.append({**point, "runtime": ev.runtime, "energy": ev.energy, "area": ev.area, "objective": ev.objective, "feasible": ev.feasible})
    df = pd.DataFrame(rows, columns=[*grid, *RESULT_COLUMNS])
    df["is_min"] = False
    feasible = df[df["feasible"]]
    if not feasible.empty:
        df.loc[feasible["objective"].idxmin(), "is_min"] = True
    return df


def run(
    grid: Mapping[str, Sequence[float]],
    objective: Objective,
    model_path: Optional[PathLike] = None,
    workload_path: Optional[PathLike] = None,
    scenario: Optional[str] = None,
    dot_cfg: Optional[DotProductConfig] = None,
    mapper_cfg: Optional[MapperConfig] = None,
    overrides: Optional[Mapping[str, float]] = None,
    jobs: int = 1,
    output_path: Optional[PathLike] = None,
) -> pd.DataFrame:
    """
    Pipeline de balayage.

    Args:
        grid: Axes par paramètre (valeurs dans l'ordre d'évaluation)
        objective: Objectif et surface maximale (inf = pas de contrainte)
        model_path / workload_path / scenario: comme pour l'optimisation
        jobs: Nombre de processus joblib
        output_path: CSV des points évalués
    """
    problem = build_problem(model_path, workload_path, scenario, dot_cfg, mapper_cfg, overrides)
    df = sweep(problem, grid, objective, jobs)
    best = df[df["is_min"]]
    if not best.empty:
        logger.info(f"Minimum: {best.iloc[0][list(grid)].to_dict()} objectif {best.iloc[0]['objective']:g}")
    else:
        logger.warning("Aucun point réalisable sur la grille")
    if output_path:
        save_data(df, output_path)
        logger.info(f"Balayage sauvegardé: {output_path}")
    return df


def main() -> None:
    from diffhw.cli import main as cli_main

    raise SystemExit(cli_main(["sweep", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
