import math
from pathlib import Path

import pandas as pd
import pytest
from pydantic import ValidationError as PydanticValidationError

from diffhw.dopt import (
    BipartiteGraph,
    DotProductProblem,
    Evaluation,
    GradientAccumulator,
    Objective,
    ObjectiveKind,
    OptimizerConfig,
    Penalty,
    Status,
    WorkloadProblem,
    accumulate_schedule,
    apply_update,
    auto_learning_rate,
    effective_gradients,
    load_dotproduct_config,
    load_objective,
    load_optimizer_config,
    memory_time,
    memsize_time_gradient,
    rank_technology_targets,
    ranking_frame,
    run_descent,
)
from diffhw.errors import ValidationError
from diffhw.expr import ParamId, ParamKind, ValueDomain, evaluate, param
from diffhw.hwmodel import CompUnit, Lattice, MemUnit, Metric, ParamSpec
from diffhw.mapper import ExecRecord, MapResult, MemoryState, ComputeState
from diffhw.workload import Workload

SA = CompUnit.SYSTOLIC_ARRAY
GB, MM = MemUnit.GLOBAL_BUF, MemUnit.MAIN_MEM
CONFIGS = Path(__file__).resolve().parents[2] / "configs"
TIME_ONLY = Objective(kind=ObjectiveKind.TIME, area_max=100.0)


def real_spec(name, seed=1.0, lower=0.5, upper=2.0):
    return ParamSpec(ParamId(name, ParamKind.TECH, ValueDomain.REAL), seed, lower, upper, Lattice.REAL)


class Parabola:
    """F(x) = (x − 1)² + 1, surface constante."""

    def __init__(self):
        self.specs = {"x": real_spec("x", 1.0, 0.1, 10.0)}

    @property
    def area_params(self):
        return frozenset()

    def area(self, values):
        return 0.1

    def evaluate(self, values, obj):
        figure = (values["x"] - 1.0) ** 2 + 1.0
        return Evaluation(figure, 0.0, 0.1, figure, obj.value(figure, 0.1), obj.feasible(0.1))

    def backward(self, values, obj):
        return GradientAccumulator(g={"x": 2.0 * (values["x"] - 1.0)}, figure=self.evaluate(values, obj).figure, area=0.1)


def seed_values(problem):
    return {n: problem.base[n] for n in problem.specs}


def test_dot_product_closed_forms():
    assert memory_time(1024, 64, 100, 10) == 1760
    # (⌈1024/64⌉ − ⌈1024/128⌉)·110
    assert memsize_time_gradient(1024, 64, 128, 100, 10) == 880


def test_apply_update_fixed_point():
    specs = {"x": real_spec("x"), "y": real_spec("y")}
    grads = GradientAccumulator(g={"x": 0.0, "y": 0.0}, figure=1.0, area=0.5)
    upd = apply_update({"x": 1.2, "y": 0.7}, grads, specs, Objective(area_max=1.0), 0.3)
    assert upd.values == {"x": 1.2, "y": 0.7}
    assert not upd.clamped


def test_apply_update_clamps_to_bounds():
    specs = {"x": real_spec("x")}
    grads = GradientAccumulator(g={"x": 10.0}, figure=1.0, area=0.5)
    upd = apply_update({"x": 1.0}, grads, specs, Objective(area_max=1.0), 1.0)
    assert upd.values == {"x": 0.5}
    assert upd.clamped == frozenset({"x"})


def test_area_violation_pushes_area_params_down():
    specs = {"x": real_spec("x")}
    grads = GradientAccumulator(g={"x": 0.0}, area_grad={"x": 2.0}, figure=10.0, area=5.0)
    obj = Objective(area_max=1.0)
    assert effective_gradients(grads, specs, obj) == {"x": 20.0}
    upd = apply_update({"x": 1.0}, grads, specs, obj, 0.01)
    assert upd.values["x"] == pytest.approx(0.8)


def test_auto_learning_rate_limits_first_step():
    specs = {"x": real_spec("x"), "y": real_spec("y")}
    lr = auto_learning_rate({"x": 4.0, "y": -1.0}, {"x": 2.0, "y": 1.0}, specs, 0.1)
    # |Δx|/x = lr·4/2 = 0.1
    assert lr == pytest.approx(0.05)
    assert auto_learning_rate({"x": 0.0, "y": 0.0}, {"x": 1.0, "y": 1.0}, specs, 0.1) == 0.0


def test_area_violation_shrinks_capacity(model, chain):
    problem = WorkloadProblem(chain, model, names=["globalBuf.capacity", "sysArrX"])
    obj = Objective(kind=ObjectiveKind.EDP, area_max=0.5)
    values = seed_values(problem)
    grads = problem.backward(values, obj)
    assert grads.area > obj.area_max
    g = effective_gradients(grads, problem.specs, obj)
    lr = auto_learning_rate(g, values, problem.specs, 0.1)
    upd = apply_update(values, grads, problem.specs, obj, lr)
    assert upd.relaxed["globalBuf.capacity"] < values["globalBuf.capacity"]


def test_accumulate_schedule_hidden_compute(make_concrete):
    c = make_concrete(mem={GB: {Metric.READ_ENERGY: 0.5}}, comp={SA: {Metric.INT_ENERGY: 0.25}})
    rec = ExecRecord("v", 6.0, {SA: 6.0}, {GB: 10.0}, 0.0, 10.0, 6.0, {SA: 96}, {GB: 1280}, {}, 0)
    r = MapResult(10.0, {GB: MemoryState(n_reads=1280)}, {SA: ComputeState(n_ops=96)}, [rec])
    acc = GradientAccumulator()
    accumulate_schedule(r, c, acc)
    assert acc.t_grad == {GB: -4.0, SA: 0.0}
    assert acc.e_grad == {GB: 640.0, SA: 24.0}


def test_lagrangian_pure_area_param(model, chain):
    problem = WorkloadProblem(chain, model, names=["sram.cellArea", "globalBuf.bankSize"])
    obj = Objective(kind=ObjectiveKind.EDP, area_max=1.0, lagrange=0.5)
    values = seed_values(problem)
    grads = problem.backward(values, obj)
    name = "sram.cellArea"
    h = 1e-6 * values[name]
    hi, lo = dict(values), dict(values)
    hi[name] += h
    lo[name] -= h
    da = (problem.area(hi) - problem.area(lo)) / (2 * h)
    assert grads.area_grad[name] == pytest.approx(da, rel=1e-6)
    assert grads.g[name] == pytest.approx(0.5 * da, rel=1e-6)


def test_objective_values_and_expressions():
    time = Objective(kind=ObjectiveKind.TIME, area_max=2.0, lagrange=3.0)
    assert time.value(10.0, 3.0) == 13.0
    expo = Objective(kind=ObjectiveKind.EDP, area_max=2.0, penalty=Penalty.EXPONENTIAL)
    assert expo.value(10.0, 3.0) == pytest.approx(10.0 * math.exp(0.5))
    f, a = param("F"), param("a")
    for obj in (time, expo):
        assert evaluate(obj.expr(f, a), {"F": 10.0, "a": 3.0}) == pytest.approx(obj.value(10.0, 3.0))
    assert Objective(kind="energy", area_max=1.0).figure(2.0, 5.0) == 5.0
    assert Objective(area_max=1.0).figure(2.0, 5.0) == 10.0
    with pytest.raises(PydanticValidationError):
        Objective(area_max=0.0)


def test_config_loaders():
    obj = load_objective(CONFIGS / "optimizer.yaml")
    assert (obj.kind, obj.area_max) == (ObjectiveKind.EDP, 2.0)
    assert load_objective(CONFIGS / "optimizer.yaml", area_max=5.0).area_max == 5.0
    assert load_optimizer_config(CONFIGS / "optimizer.yaml").max_epochs == 50
    cfg = load_dotproduct_config(CONFIGS / "dotproduct.yaml")
    assert cfg.chunks == [1024, 2048, 512, 4096]
    with pytest.raises(ValidationError) as exc:
        load_objective(None, area_max=-1.0)
    assert "objective.area_max" in exc.value.missing
    with pytest.raises(ValidationError):
        load_dotproduct_config(None, chunks=[0])


def test_dot_product_problem_is_time_only():
    problem = DotProductProblem()
    with pytest.raises(ValidationError):
        problem.evaluate({"B": 16, "P": 2}, Objective(kind=ObjectiveKind.EDP, area_max=1.0))
    ev = problem.evaluate({"B": 128, "P": 2}, Objective(kind=ObjectiveKind.TIME, area_max=1.0))
    assert ev.figure == 6600
    assert ev.area == pytest.approx(0.004 * 128 + 0.05 * 2 + 0.02)
    assert ev.feasible


def test_rank_zero_gradients_keep_input_order():
    assert rank_technology_targets({}, {"b": 1.0, "a": 2.0}) == [("b", 0.0), ("a", 0.0)]


def test_rank_absent_param_last():
    ranking = rank_technology_targets({"b": 1.0, "c": -0.5}, {"a": 1.0, "b": 2.0, "c": 8.0})
    assert ranking == [("c", 4.0), ("b", 2.0), ("a", 0.0)]
    df = ranking_frame(ranking, {"b": 1.0, "c": -0.5})
    assert list(df["rank"]) == [1, 2, 3]
    assert df.loc[0, "gradient"] == -0.5


def _ranked(model, w):
    problem = WorkloadProblem(w, model)
    values = seed_values(problem)
    grads = problem.backward(values, TIME_ONLY)
    ranking = rank_technology_targets(grads.g, values, graph=problem.graph)
    side = {}
    for name, score in ranking:
        units = problem.graph.units_of(name)
        if units and all(isinstance(u, MemUnit) for u in units):
            side.setdefault("memory", []).append(score)
        elif units and all(isinstance(u, CompUnit) for u in units):
            side.setdefault("compute", []).append(score)
    assert "frequency" not in dict(ranking)
    return side


def test_rank_memory_bound_workload(model, vertex):
    w = Workload((vertex("m", {SA: 16}, {MM: 1 << 20}, alloc=64),))
    side = _ranked(model, w)
    assert max(side["memory"]) > max(side["compute"])


def test_rank_compute_bound_workload(model, vertex):
    w = Workload((vertex("c", {SA: 1 << 20}, {GB: 16}, alloc=64),))
    side = _ranked(model, w)
    assert max(side["compute"]) > max(side["memory"])


def test_bipartite_graph_edges(model):
    graph = BipartiteGraph.from_model(model)
    for key, e in model.entries.items():
        neighbours = {n for n in graph.params if key in graph.metrics_of(n)}
        assert neighbours == set(e.params)
    assert {q for _, q in graph.metrics_of("sram.cellArea")} == {Metric.AREA}
    assert graph.only_soc("frequency")
    assert not graph.only_soc("globalBuf.capacity")
    assert set(graph.to_frame().columns) == {"param", "unit", "metric"}


def test_seed_at_optimum_converges_immediately():
    problem = Parabola()
    result = run_descent(problem, {"x": 1.0}, Objective(kind=ObjectiveKind.TIME, area_max=1.0))
    assert result.epochs <= 2
    assert result.values == {"x": 1.0}
    assert result.status is Status.CONVERGED


def test_descent_moves_towards_minimum():
    problem = Parabola()
    obj = Objective(kind=ObjectiveKind.TIME, area_max=1.0)
    result = run_descent(problem, {"x": 4.0}, obj, OptimizerConfig(max_epochs=200, boundary_check=False))
    assert result.values["x"] == pytest.approx(1.0, abs=1e-2)
    assert result.history["objective"].iloc[-1] < result.history["objective"].iloc[0]


def test_descent_rejects_out_of_bounds_seed():
    from diffhw.errors import OutOfBounds

    with pytest.raises(OutOfBounds):
        run_descent(Parabola(), {"x": 50.0}, Objective(kind=ObjectiveKind.TIME, area_max=1.0))


def test_descent_is_deterministic():
    problem = DotProductProblem()
    obj = Objective(kind=ObjectiveKind.TIME, area_max=1.0)
    first = run_descent(problem, {"B": 16, "P": 2}, obj)
    second = run_descent(DotProductProblem(), {"B": 16, "P": 2}, obj)
    pd.testing.assert_frame_equal(first.history, second.history)
    assert first.values == second.values


def test_resume_values_keeps_only_problem_params(tmp_path):
    from diffhw.pipelines.optimize_design import resume_values

    path = tmp_path / "previous.json"
    path.write_text('{"objective": 6600, "values": {"B": 128, "P": 2, "sysArrX": 8}}\n', encoding="utf-8")
    assert resume_values(path, DotProductProblem()) == {"B": 128.0, "P": 2.0}
    path.write_text('{"objective": 6600}\n', encoding="utf-8")
    with pytest.raises(ValidationError) as exc:
        resume_values(path, DotProductProblem())
    assert exc.value.missing == ["values"]
