"""Boucle d'optimisation : époques de descente, point réalisable retenu, frontières."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from diffhw.dopt.backward import GradientAccumulator
from diffhw.dopt.problems import Evaluation, Problem, WorkloadProblem
from diffhw.dopt.schemas import Objective, OptimizerConfig
from diffhw.dopt.update import apply_update, auto_learning_rate, effective_gradients, snap_values
from diffhw.errors import OutOfBounds
from diffhw.hwmodel import HardwareModel, Lattice
from diffhw.mapper import MapperConfig
from diffhw.settings import settings
from diffhw.utils.io import save_data
from diffhw.workload import Workload

logger = logging.getLogger(__name__)


class Status(str, Enum):
    CONVERGED = "converged"
    TARGET_MET = "target_met"
    MAX_EPOCHS = "max_epochs"


@dataclass
class OptimizationResult:
    values: Dict[str, float]
    evaluation: Evaluation
    history: pd.DataFrame
    status: Status
    epochs: int
    gradients: Dict[str, float] = field(default_factory=dict)

    @property
    def best_objective(self) -> float:
        return self.evaluation.objective

    @property
    def best_area(self) -> float:
        return self.evaluation.area

    @property
    def feasible(self) -> bool:
        return self.evaluation.feasible

    @property
    def converged(self) -> bool:
        return self.status is not Status.MAX_EPOCHS and self.feasible


def _rank_key(ev: Evaluation) -> Tuple[bool, float]:
    return (not ev.feasible, ev.objective if ev.feasible else ev.area)


class _Best:
    """Meilleur point vu : réalisable d'abord, puis objectif minimal (premier en cas d'égalité)."""

    def __init__(self) -> None:
        self.values: Optional[Dict[str, float]] = None
        self.evaluation: Optional[Evaluation] = None

    def offer(self, values: Mapping[str, float], ev: Evaluation) -> bool:
        if self.evaluation is None or _rank_key(ev) < _rank_key(self.evaluation):
            self.values, self.evaluation = dict(values), ev
            return True
        return False


def _relative_change(old: Mapping[str, float], new: Mapping[str, float]) -> float:
    change = 0.0
    for name, v in old.items():
        denom = abs(v) or 1.0
        change = max(change, abs(new[name] - v) / denom)
    return change


def _cycling(visited: Sequence[Tuple[float, ...]]) -> bool:
    """Oscillation entre deux points du treillis (A, B, A, B)."""
    if len(visited) < 4:
        return False
    return visited[-1] == visited[-3] and visited[-2] == visited[-4] and visited[-1] != visited[-2]


def _fill_feasible(
    problem: Problem,
    base: Mapping[str, float],
    others: Sequence[str],
    obj: Objective,
) -> Optional[Dict[str, float]]:
    """Met chaque paramètre de `others` à la plus grande valeur gardant a ≤ A."""
    cand = dict(base)
    ladders = {q: problem.specs[q].lattice_values() for q in others}
    for q in others:
        if not ladders[q]:
            return None
        cand[q] = ladders[q][0]
    if problem.area(cand) > obj.area_max:
        return None
    for q in others:
        for v in reversed(ladders[q]):
            cand[q] = v
            if problem.area(cand) <= obj.area_max:
                break
        else:
            cand[q] = ladders[q][0]
    return cand


def boundary_candidates(
    problem: Problem,
    base: Mapping[str, float],
    clamped: Sequence[str],
    obj: Objective,
) -> List[Dict[str, float]]:
    """Points de frontière : bornes des paramètres saturés et bord de la contrainte de surface."""
    out: List[Dict[str, float]] = []
    for name in clamped:
        spec = problem.specs[name]
        for bound in (spec.lower, spec.upper):
            cand = dict(base)
            cand[name] = spec.snap(bound)
            out.append(cand)
    coupled = [n for n in sorted(problem.area_params) if problem.specs[n].lattice is not Lattice.REAL]
    for name in coupled:
        others = [q for q in coupled if q != name]
        for v in problem.specs[name].lattice_values(limit=settings.BOUNDARY_POINTS):
            start = dict(base)
            start[name] = v
            cand = _fill_feasible(problem, start, others, obj)
            if cand is not None:
                out.append(cand)
    seen = set()
    unique = []
    for cand in out:
        key = tuple(sorted(cand.items()))
        if key not in seen:
            seen.add(key)
            unique.append(cand)
    return unique


def run_descent(
    problem: Problem,
    seed: Mapping[str, float],
    obj: Objective,
    cfg: Optional[OptimizerConfig] = None,
) -> OptimizationResult:
    """specialize → map → estimate → backward → update, jusqu'à convergence."""
    cfg = cfg or OptimizerConfig()
    specs = problem.specs
    relaxed: Dict[str, float] = {}
    for name, spec in specs.items():
        value = float(seed.get(name, spec.seed))
        if not spec.contains(value):
            raise OutOfBounds(name, value, (spec.lower, spec.upper))
        relaxed[name] = value
    discrete = all(spec.lattice is not Lattice.REAL for spec in specs.values())

    point = snap_values(relaxed, specs)
    ev = problem.evaluate(point, obj)
    best = _Best()
    best.offer(point, ev)
    rows = [{"epoch": 0, "objective": ev.objective, "area": ev.area, **point}]
    visited = [tuple(point.values())]
    clamped: set = set()
    lr = cfg.learning_rate
    status = Status.MAX_EPOCHS
    grads: Optional[GradientAccumulator] = None
    epoch = 0

    for epoch in range(1, cfg.max_epochs + 1):
        if cfg.target is not None and ev.feasible and ev.figure <= cfg.target:
            status = Status.TARGET_MET
            epoch -= 1
            break
        grads = problem.backward(point, obj)
        if lr is None:
            lr = auto_learning_rate(effective_gradients(grads, specs, obj), relaxed, specs, cfg.max_step)
            logger.debug(f"Pas d'apprentissage automatique: {lr:g}")
        if lr == 0.0:
            status = Status.CONVERGED
            epoch -= 1
            break

        step = lr
        for _ in range(cfg.max_backtrack + 1):
            upd = apply_update(relaxed, grads, specs, obj, step)
            new_ev = problem.evaluate(upd.values, obj)
            worse = new_ev.objective > ev.objective + cfg.increase_tolerance * abs(ev.objective)
            if not (ev.feasible and new_ev.feasible and worse):
                break
            step *= 0.5
        lr = step

        change = _relative_change(relaxed, upd.relaxed)
        relaxed, point, ev = upd.relaxed, upd.values, new_ev
        clamped |= upd.clamped
        best.offer(point, ev)
        rows.append({"epoch": epoch, "objective": ev.objective, "area": ev.area, **point})
        visited.append(tuple(point.values()))
        logger.debug(f"Époque {epoch}: objectif {ev.objective:g}, surface {ev.area:g}, variation {change:.3g}")
        if change < cfg.tolerance or (discrete and _cycling(visited)):
            status = Status.CONVERGED
            break

    if cfg.boundary_check and best.values is not None:
        candidates = boundary_candidates(problem, best.values, sorted(clamped), obj)
        improved = 0
        for cand in candidates:
            if best.offer(cand, problem.evaluate(cand, obj)):
                improved += 1
        logger.debug(f"Frontières: {len(candidates)} points évalués, {improved} améliorations")

    history = pd.DataFrame(rows, columns=["epoch", "objective", "area", *specs])
    result = OptimizationResult(
        values=best.values or point,
        evaluation=best.evaluation or ev,
        history=history,
        status=status,
        epochs=epoch,
        gradients=dict(grads.g) if grads is not None else {},
    )
    logger.info(
        f"Optimisation {status.value} après {epoch} époques: objectif {result.best_objective:g}, "
        f"surface {result.best_area:g} (réalisable={result.feasible})"
    )
    return result


def optimize(
    w: Workload,
    h: HardwareModel,
    seed: Optional[Mapping[str, float]],
    obj: Objective,
    cfg: Optional[OptimizerConfig] = None,
    mapper_cfg: Optional[MapperConfig] = None,
    names: Optional[Sequence[str]] = None,
) -> OptimizationResult:
    problem = WorkloadProblem(w, h, mapper_cfg, names)
    return run_descent(problem, seed or {}, obj, cfg)


def write_history(result: OptimizationResult, path: Union[str, Path]) -> Path:
    return save_data(result.history, path)
