import pytest

from diffhw.dopt import (
    DotProductProblem,
    Objective,
    ObjectiveKind,
    OptimizerConfig,
    WorkloadProblem,
    boundary_candidates,
    run_descent,
)
from diffhw.dsim import estimate
from diffhw.hwmodel import ConcreteHardwareModel, MemUnit, Metric, metric_key
from diffhw.mapper import MapperConfig, map_workload
from diffhw.pipelines.runconfig import parse_grid
from diffhw.pipelines.sweep import sweep
from diffhw.workload import dot

DOT_OBJECTIVE = Objective(kind=ObjectiveKind.TIME, area_max=1.0)
SEEDS = [
    {"B": 16, "P": 2},
    {"B": 1, "P": 1},
    {"B": 64, "P": 8},
    {"B": 512, "P": 4},
    {"B": 2, "P": 128},
]


@pytest.fixture(scope="module")
def dot_sweep():
    grid = parse_grid(["B=pow2:1:4096", "P=pow2:1:256"])
    return sweep(DotProductProblem(), grid, DOT_OBJECTIVE)


def test_sweep_minimum(dot_sweep):
    assert len(dot_sweep) == 117
    best = dot_sweep[dot_sweep["is_min"]].iloc[0]
    assert best["objective"] == 6600
    assert best["B"] == 128
    # B = 256 dépasse déjà la surface pour tout P
    assert not dot_sweep[dot_sweep["B"] >= 256]["feasible"].any()


@pytest.mark.parametrize("seed", SEEDS)
def test_descent_reaches_sweep_minimum(dot_sweep, seed):
    result = run_descent(DotProductProblem(), seed, DOT_OBJECTIVE)
    sweep_min = dot_sweep[dot_sweep["feasible"]]["objective"].min()
    assert result.feasible
    assert result.best_objective <= sweep_min + 1e-9
    assert result.best_objective == 6600


def test_boundary_scan_finds_area_edge():
    problem = DotProductProblem()
    candidates = boundary_candidates(problem, {"B": 16.0, "P": 2.0}, [], DOT_OBJECTIVE)
    assert {"B": 128.0, "P": 8.0} in candidates
    assert all(problem.area(c) <= DOT_OBJECTIVE.area_max for c in candidates)


def test_boundary_check_only_improves():
    cfg = OptimizerConfig(max_epochs=5)
    without = run_descent(DotProductProblem(), SEEDS[0], DOT_OBJECTIVE, cfg.model_copy(update={"boundary_check": False}))
    with_check = run_descent(DotProductProblem(), SEEDS[0], DOT_OBJECTIVE, cfg)
    assert with_check.best_objective <= without.best_objective


def test_history_nearly_monotone_once_feasible():
    result = run_descent(DotProductProblem(), SEEDS[0], DOT_OBJECTIVE)
    feasible = result.history[result.history["area"] <= DOT_OBJECTIVE.area_max]["objective"].tolist()
    assert feasible
    for before, after in zip(feasible, feasible[1:]):
        assert after <= before * 1.05
    assert list(result.history.columns[:3]) == ["epoch", "objective", "area"]


def _memory_bound_problem(model, obj_names):
    # quatre produits partiels limités par la bande passante de la mémoire principale
    w = dot(n=1 << 16, chunks=4, elem_bytes=2)
    return WorkloadProblem(w, model, MapperConfig(prefetch=False), obj_names)


def test_time_gradient_matches_bandwidth_finite_difference(model):
    problem = _memory_bound_problem(model, ["dram.cellReadPower"])
    values = {n: problem.base[n] for n in problem.specs}
    grads = problem.backward(values, DOT_OBJECTIVE.model_copy(update={"area_max": 100.0}))
    name = metric_key(MemUnit.MAIN_MEM, Metric.BANDWIDTH)
    c = problem.concrete(values)
    bw = c.lookup(MemUnit.MAIN_MEM, Metric.BANDWIDTH)

    def runtime_at(bandwidth):
        shifted = ConcreteHardwareModel({**c.values, (MemUnit.MAIN_MEM, Metric.BANDWIDTH): bandwidth}, c.model, c.tech, c.arch)
        return estimate(map_workload(problem.w, shifted, problem.mapper_cfg), shifted).runtime

    h = 0.01 * bw
    fd = (runtime_at(bw + h) - runtime_at(bw - h)) / (2 * h)
    assert fd < 0
    assert grads.metric_grad[name] == pytest.approx(fd, rel=0.1)


def test_energy_gradient_matches_read_power_finite_difference(model):
    problem = _memory_bound_problem(model, ["dram.cellReadPower"])
    obj = Objective(kind=ObjectiveKind.ENERGY, area_max=100.0)
    name = "dram.cellReadPower"
    x = problem.base[name]
    g = problem.backward({name: x}, obj).g[name]
    fd = (problem.evaluate({name: 1.01 * x}, obj).objective - problem.evaluate({name: 0.99 * x}, obj).objective) / (0.02 * x)
    assert g > 0
    assert g == pytest.approx(fd, rel=0.1)


def test_workload_descent_respects_area(model, chain):
    problem = WorkloadProblem(chain, model, names=["globalBuf.capacity", "sysArrX", "sysArrY"])
    obj = Objective(kind=ObjectiveKind.EDP, area_max=2.0)
    result = run_descent(problem, {}, obj, OptimizerConfig(max_epochs=5))
    assert result.feasible
    assert problem.area(result.values) <= obj.area_max
    for name, value in result.values.items():
        assert problem.specs[name].contains(value)
