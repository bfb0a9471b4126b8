from diffhw.pipelines import generate_model, make_workload, optimize_design, simulate, sweep
from diffhw.dopt import Objective, OptimizerConfig
from diffhw.errors import NonConvergence


def test_pipeline_runs(tmp_path, arch_path, tech_path):
    model_path = tmp_path / "model.hw"
    workload_path = tmp_path / "cnn.dfg"
    generate_model.run(arch_path, tech_path, model_path, report_path=tmp_path / "model.txt")
    make_workload.run("cnn", workload_path, {"layers": 2})
    sim = simulate.run(model_path, workload_path, trace_path=tmp_path / "trace.csv", report_path=tmp_path / "report.csv")
    assert sim.estimate.runtime > 0

    objective = Objective(kind="edp", area_max=2.0)
    try:
        result = optimize_design.run(
            objective,
            OptimizerConfig(max_epochs=3),
            model_path,
            workload_path,
            params=["globalBuf.capacity", "sysArrX", "sysArrY"],
            history_path=tmp_path / "history.csv",
        )
    except NonConvergence as exc:
        # les sorties sont écrites avant l'exception
        result = exc.result
    assert len(result.history) >= 1
    df = sweep.run({"sysArrX": [8.0, 16.0]}, objective, model_path, workload_path, output_path=tmp_path / "sweep.csv")
    assert len(df) == 2

    for name in ("model.hw", "model.txt", "cnn.dfg", "trace.csv", "report.csv", "history.csv", "sweep.csv"):
        assert (tmp_path / name).exists()
