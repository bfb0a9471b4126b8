"""DOpt : passe arrière et descente de gradient sous contrainte de surface."""
from diffhw.dopt.backward import BipartiteGraph, GradientAccumulator, accumulate_schedule, backward_pass
from diffhw.dopt.optimize import OptimizationResult, Status, boundary_candidates, optimize, run_descent, write_history
from diffhw.dopt.problems import (
    DotProductProblem,
    Evaluation,
    Problem,
    WorkloadProblem,
    memory_time,
    memsize_time_gradient,
)
from diffhw.dopt.rank import rank_technology_targets, ranking_frame
from diffhw.dopt.schemas import (
    DotProductConfig,
    Objective,
    ObjectiveKind,
    OptimizerConfig,
    Penalty,
    load_dotproduct_config,
    load_objective,
    load_optimizer_config,
)
from diffhw.dopt.update import Update, apply_update, auto_learning_rate, effective_gradients, snap_values

__all__ = [
    "BipartiteGraph", "GradientAccumulator", "accumulate_schedule", "backward_pass",
    "OptimizationResult", "Status", "boundary_candidates", "optimize", "run_descent",
    "write_history", "DotProductProblem", "Evaluation", "Problem", "WorkloadProblem",
    "memory_time", "memsize_time_gradient", "rank_technology_targets", "ranking_frame",
    "DotProductConfig", "Objective", "ObjectiveKind", "OptimizerConfig", "Penalty",
    "load_dotproduct_config", "load_objective", "load_optimizer_config", "Update",
    "apply_update", "auto_learning_rate", "effective_gradients", "snap_values",
]
