import pytest

from diffhw.errors import GridTooLarge, ValidationError
from diffhw.pipelines.runconfig import (
    check_grid_size,
    parse_assignments,
    parse_axis,
    parse_grid,
    run_config,
)
from diffhw.pipelines.sweep import grid_points


def test_parse_assignments_keeps_order():
    got = parse_assignments(["sysArrX=32", " sram.cellReadPower = 4.5 "])
    assert list(got.items()) == [("sysArrX", 32.0), ("sram.cellReadPower", 4.5)]


@pytest.mark.parametrize("item", ["sysArrX", "=3", "sysArrX=trente"])
def test_parse_assignments_errors(item):
    with pytest.raises(ValidationError):
        parse_assignments([item])


def test_parse_axis_forms():
    assert parse_axis("1,2,5", "B") == [1.0, 2.0, 5.0]
    assert parse_axis("0:1:5", "B") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_axis("pow2:1:4096", "B") == [float(2**k) for k in range(13)]
    # bornes non puissances de deux : arrondies vers l'intérieur
    assert parse_axis("pow2:3:100", "B") == [4.0, 8.0, 16.0, 32.0, 64.0]


@pytest.mark.parametrize("text", ["", "pow2:8", "pow2:0:4", "pow2:16:4", "1:2", "1:2:0", "a,b"])
def test_parse_axis_errors(text):
    with pytest.raises(ValidationError):
        parse_axis(text, "B")


def test_parse_grid_and_points():
    grid = parse_grid(["B=pow2:1:4096", "P=pow2:1:256"])
    assert check_grid_size(grid) == 13 * 9
    points = grid_points(grid)
    assert len(points) == 117
    assert points[:2] == [{"B": 1.0, "P": 1.0}, {"B": 1.0, "P": 2.0}]
    with pytest.raises(ValidationError):
        parse_grid(["B:1,2"])


def test_grid_too_large():
    grid = {"a": list(range(1000)), "b": list(range(1000)), "c": [1.0, 2.0]}
    with pytest.raises(GridTooLarge):
        check_grid_size(grid)
    assert check_grid_size({"a": [1.0]}, max_points=1) == 1
    assert check_grid_size({}) == 1


def test_run_config_checks_inputs(tmp_path):
    present = tmp_path / "m.hw"
    present.write_text("", encoding="utf-8")
    cfg = run_config("dsim", inputs={"model": present, "trace": None}, overrides={"x": 1.0})
    assert cfg.inputs == {"model": present}
    with pytest.raises(ValidationError):
        run_config("dsim", inputs={"model": tmp_path / "absent.hw"})
