"""Pipeline: optimisation conjointe technologie / architecture (DOpt)."""
from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from diffhw.dgen import load_model
from diffhw.dopt import (
    DotProductConfig,
    DotProductProblem,
    Objective,
    OptimizationResult,
    OptimizerConfig,
    Problem,
    WorkloadProblem,
    rank_technology_targets,
    ranking_frame,
    run_descent,
    write_history,
)
from diffhw.errors import NonConvergence, ValidationError
from diffhw.mapper import MapperConfig
from diffhw.utils.io import load_data, save_data
from diffhw.workload import load_workload

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SCENARIOS = ("dot",)


def build_problem(
    model_path: Optional[PathLike] = None,
    workload_path: Optional[PathLike] = None,
    scenario: Optional[str] = None,
    dot_cfg: Optional[DotProductConfig] = None,
    mapper_cfg: Optional[MapperConfig] = None,
    overrides: Optional[Mapping[str, float]] = None,
    params: Optional[Sequence[str]] = None,
) -> Problem:
    """Problème du scénario intégré, ou workload + modèle (surcharges appliquées aux seeds)."""
    if scenario is not None:
        if scenario not in SCENARIOS:
            raise ValidationError(f"scénario inconnu {scenario!r} ({', '.join(SCENARIOS)})")
        problem = DotProductProblem(dot_cfg)
        unknown = set(overrides or {}) - problem.specs.keys()
        if unknown:
            raise ValidationError("paramètres inconnus", missing=unknown)
        return problem
    if model_path is None or workload_path is None:
        raise ValidationError("--model et --workload sont requis hors scénario")
    h = load_model(model_path)
    if overrides:
        h = h.with_overrides(overrides)
    return WorkloadProblem(load_workload(workload_path), h, mapper_cfg, params)


def resume_values(path: PathLike, problem: Problem) -> Dict[str, float]:
    """Valeurs d'un résultat JSON précédent, limitées aux paramètres du problème."""
    data = load_data(path)
    values = data.get("values") if isinstance(data, dict) else None
    if not isinstance(values, dict):
        raise ValidationError(f"{path}: champ `values` absent", missing=["values"])
    kept = {n: float(v) for n, v in values.items() if n in problem.specs}
    logger.info(f"Reprise depuis {path}: {len(kept)} paramètres")
    return kept


def rank_at_best(problem: Problem, result: OptimizationResult, obj: Objective) -> List[Tuple[str, float]]:
    grads = problem.backward(result.values, obj)
    graph = getattr(problem, "graph", None)
    result.gradients = dict(grads.g)
    return rank_technology_targets(grads.g, result.values, list(problem.specs), graph)


def run(
    objective: Objective,
    opt_cfg: Optional[OptimizerConfig] = None,
    model_path: Optional[PathLike] = None,
    workload_path: Optional[PathLike] = None,
    scenario: Optional[str] = None,
    dot_cfg: Optional[DotProductConfig] = None,
    mapper_cfg: Optional[MapperConfig] = None,
    overrides: Optional[Mapping[str, float]] = None,
    params: Optional[Sequence[str]] = None,
    history_path: Optional[PathLike] = None,
    result_path: Optional[PathLike] = None,
    ranking_path: Optional[PathLike] = None,
    resume_path: Optional[PathLike] = None,
) -> OptimizationResult:
    """
    Pipeline d'optimisation.

    Args:
        objective: Objectif (temps, énergie, EDP) et surface maximale
        opt_cfg: Configuration de la descente
        model_path / workload_path: Entrées hors scénario intégré
        scenario: `dot` pour le produit scalaire par tuiles
        overrides: Point de départ imposé
        params: Sous-ensemble de paramètres optimisés (défaut : tous)
        history_path: Historique CSV par époque
        result_path: Résultat JSON (valeurs, statut, objectif)
        ranking_path: Classement CSV des cibles technologiques
        resume_path: Résultat JSON d'un run précédent, repris comme point de départ

    Raises:
        NonConvergence: après écriture des sorties, si la descente n'a pas convergé
    """
    problem = build_problem(model_path, workload_path, scenario, dot_cfg, mapper_cfg, overrides, params)
    logger.info(f"Optimisation {objective.kind.value} sous surface {objective.area_max:g} mm2, {len(problem.specs)} paramètres")
    seed = resume_values(resume_path, problem) if resume_path else {}
    seed.update(overrides or {})
    result = run_descent(problem, seed, objective, opt_cfg)
    ranking = rank_at_best(problem, result, objective)

    if history_path:
        write_history(result, history_path)
        logger.info(f"Historique sauvegardé: {history_path}")
    if result_path:
        save_data(
            {
                "status": result.status.value,
                "epochs": result.epochs,
                "objective": result.best_objective,
                "area": result.best_area,
                "feasible": result.feasible,
                "values": result.values,
            },
            result_path,
        )
        logger.info(f"Résultat sauvegardé: {result_path}")
    if ranking_path:
        save_data(ranking_frame(ranking, result.gradients), ranking_path)
        logger.info(f"Classement sauvegardé: {ranking_path}")

    if not result.converged:
        logger.warning(f"Pas de convergence ({result.status.value}, réalisable={result.feasible})")
        raise NonConvergence(f"optimisation non convergée: {result.status.value}", result)
    return result


def main() -> None:
    from diffhw.cli import main as cli_main

    raise SystemExit(cli_main(["dopt", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
