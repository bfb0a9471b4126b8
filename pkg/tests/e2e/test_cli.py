import json
from pathlib import Path

import pytest

from diffhw.cli import main
from diffhw.pipelines import simulate
from diffhw.utils.io import load_data

DOT_CONFIG = Path(__file__).resolve().parents[2] / "configs" / "dotproduct.yaml"
DOT_GRID = ["--grid", "B=pow2:1:4096", "--grid", "P=pow2:1:256"]


@pytest.fixture
def files(tmp_path, arch_path, tech_path):
    """Modèle et workload générés par la CLI elle-même."""
    model = tmp_path / "model.hw"
    workload = tmp_path / "cnn.dfg"
    assert main(["dgen", "--arch", str(arch_path), "--tech", str(tech_path), "--out", str(model)]) == 0
    assert main(["gen-workload", "cnn", "--out", str(workload), "--set", "layers=2"]) == 0
    return model, workload


def last_error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_dgen_then_dsim(files, capsys):
    model, workload = files
    capsys.readouterr()
    assert main(["dsim", "--model", str(model), "--workload", str(workload)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("runtime = ")
    assert "[energy]" in out and "[tiling]" in out


def test_dgen_prints_concrete_metrics(arch_path, tech_path, capsys):
    assert main(["dgen", "--arch", str(arch_path), "--tech", str(tech_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 32
    assert "SoC.frequency = 1e+09 # Hz" in lines


def test_unknown_flag_is_usage_error(capsys):
    assert main(["dsim", "--bogus"]) == 1
    assert "--bogus" in capsys.readouterr().err


def test_bad_override_syntax_is_usage_error(files):
    model, workload = files
    assert main(["dsim", "--model", str(model), "--workload", str(workload), "--set", "oops"]) == 1


def test_missing_file_is_input_error(files, tmp_path, capsys):
    _, workload = files
    capsys.readouterr()
    assert main(["dsim", "--model", str(tmp_path / "absent.hw"), "--workload", str(workload)]) == 2
    assert last_error(capsys)["error"] == "validation_error"


def test_unknown_override_is_input_error(files):
    model, workload = files
    assert main(["dsim", "--model", str(model), "--workload", str(workload), "--set", "nope=3"]) == 2


def test_parse_error_carries_line(files, tmp_path, capsys):
    model, _ = files
    bad = tmp_path / "bad.dfg"
    bad.write_text("v a alloc=4\nv b alloc=4 junk\n", encoding="utf-8")
    capsys.readouterr()
    assert main(["dsim", "--model", str(model), "--workload", str(bad)]) == 2
    report = last_error(capsys)
    assert report["error"] == "parse_error"
    assert report["details"]["line"] == 2


def test_outputs_are_deterministic(files, tmp_path):
    model, workload = files
    trace, report = tmp_path / "trace.csv", tmp_path / "report.csv"
    args = ["dsim", "--model", str(model), "--workload", str(workload), "--trace", str(trace), "--report", str(report)]
    assert main(args) == 0
    first = (trace.read_bytes(), report.read_bytes())
    assert main(args) == 0
    assert (trace.read_bytes(), report.read_bytes()) == first
    assert list(load_data(trace).columns[:2]) == ["vertex", "t_c"]


def test_gen_workload_random_seed(tmp_path):
    a, b = tmp_path / "a.dfg", tmp_path / "b.dfg"
    assert main(["gen-workload", "random", "--out", str(a), "--seed", "3", "--set", "n=25"]) == 0
    assert main(["gen-workload", "random", "--out", str(b), "--seed", "3", "--set", "n=25"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["gen-workload", "random", "--out", str(a), "--set", "colour=1"]) == 2


def test_sweep_single_point_matches_dsim(files, tmp_path):
    model, workload = files
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--model", str(model), "--workload", str(workload), "--grid", "sysArrX=16", "--out", str(out)]) == 0
    df = load_data(out)
    assert len(df) == 1
    sim = simulate.run(model, workload)
    assert df.loc[0, "runtime"] == pytest.approx(sim.estimate.runtime, rel=1e-8)
    assert df.loc[0, "energy"] == pytest.approx(sim.estimate.energy, rel=1e-8)


def test_sweep_ten_by_ten(tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["sweep", "--scenario", "dot", "--area-max", "1.0", "--grid", "B=pow2:1:512", "--grid", "P=1:10:10"]
    assert main([*args, "--out", str(out)]) == 0
    df = load_data(out)
    assert len(df) == 100
    assert df["is_min"].sum() == 1


def test_sweep_rejects_huge_grid():
    args = ["sweep", "--scenario", "dot", "--grid", "B=1:4096:2000", "--grid", "P=1:256:1000"]
    assert main(args) == 2


def test_sweep_and_dopt_agree_on_dot_scenario(tmp_path):
    sweep_out, dopt_out = tmp_path / "sweep.csv", tmp_path / "dopt.json"
    assert main(["sweep", "--scenario", "dot", "--config", str(DOT_CONFIG), *DOT_GRID, "--out", str(sweep_out)]) == 0
    df = load_data(sweep_out)
    best = df[df["is_min"]].iloc[0]

    code = main(["dopt", "--scenario", "dot", "--config", str(DOT_CONFIG), "--out", str(dopt_out)])
    # 3 : non convergé, mais meilleur point réalisable écrit
    assert code in (0, 3)
    result = load_data(dopt_out)
    assert result["feasible"]
    assert result["objective"] <= best["objective"] + 1e-9
    assert result["objective"] == 6600


def test_dopt_on_workload_writes_history(files, tmp_path):
    model, workload = files
    history = tmp_path / "history.csv"
    args = [
        "dopt", "--model", str(model), "--workload", str(workload), "--area-max", "2.0",
        "--epochs", "2", "--param", "sysArrX", "--param", "sysArrY", "--history", str(history),
    ]
    assert main(args) in (0, 3)
    df = load_data(history)
    assert list(df.columns) == ["epoch", "objective", "area", "sysArrX", "sysArrY"]


def test_dgen_csv_report(arch_path, tech_path, tmp_path):
    report = tmp_path / "metrics.csv"
    assert main(["dgen", "--arch", str(arch_path), "--tech", str(tech_path), "--report", str(report)]) == 0
    df = load_data(report)
    assert list(df.columns) == ["unit", "metric", "value", "units"]
    assert len(df) == 32
    soc = df[(df["unit"] == "SoC") & (df["metric"] == "frequency")]
    assert soc["value"].tolist() == [1e9]


def test_dopt_resumes_from_previous_result(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    base = ["dopt", "--scenario", "dot", "--config", str(DOT_CONFIG)]
    assert main([*base, "--out", str(first)]) in (0, 3)
    assert main([*base, "--resume", str(first), "--epochs", "1", "--out", str(second)]) in (0, 3)
    before, after = load_data(first), load_data(second)
    assert after["feasible"]
    assert after["objective"] <= before["objective"] + 1e-9


def test_dopt_resume_without_values_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"objective": 1.0}\n', encoding="utf-8")
    capsys.readouterr()
    assert main(["dopt", "--scenario", "dot", "--config", str(DOT_CONFIG), "--resume", str(bad)]) == 2
    assert last_error(capsys)["details"]["missing"] == ["values"]


def test_internal_error_exits_with_usage_code(files, monkeypatch, capsys):
    model, workload = files

    def boom(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(simulate, "run", boom)
    capsys.readouterr()
    assert main(["dsim", "--model", str(model), "--workload", str(workload)]) == 1
    report = last_error(capsys)
    assert report["error"] == "internal_error"
    assert report["details"]["type"] == "RuntimeError"
