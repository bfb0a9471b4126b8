import math

import pytest

from diffhw.errors import MissingMetric, OutOfBounds, UnboundParameter, ValidationError
from diffhw.expr import ParamId, ParamKind, ValueDomain, evaluate, mul, param
from diffhw.hwmodel import (
    CompUnit,
    HardwareModel,
    Lattice,
    MemUnit,
    Metric,
    ParamSpec,
    SocUnit,
    default_bounds,
    lookup,
    parse_metric,
    parse_metric_key,
    render_concrete,
    specialize,
)


@pytest.fixture
def toy_model():
    entries = {(MemUnit.MAIN_MEM, Metric.READ_ENERGY): mul(param("cellReadPower"), param("cellReadLatency"))}
    return HardwareModel.from_entries(entries, {"cellReadPower": 2.0, "cellReadLatency": 3.0})


def test_specialize_substitutes_assignment(toy_model):
    c = specialize(toy_model, {"cellReadPower": 2.0, "cellReadLatency": 3.0}, {})
    assert lookup(c, MemUnit.MAIN_MEM, Metric.READ_ENERGY) == 6.0
    assert c.model is toy_model


def test_specialize_empty_model():
    c = specialize(HardwareModel({}), {}, {})
    assert c.values == {}


def test_specialize_unbound(toy_model):
    with pytest.raises(UnboundParameter):
        specialize(toy_model, {"cellReadPower": 2.0}, {})


def test_specialize_out_of_bounds(toy_model):
    with pytest.raises(OutOfBounds) as exc:
        specialize(toy_model, {"cellReadPower": 1e6, "cellReadLatency": 3.0}, {})
    assert exc.value.param == "cellReadPower"


def test_lookup_missing_metric(toy_model):
    c = specialize(toy_model, {"cellReadPower": 2.0, "cellReadLatency": 3.0}, {})
    with pytest.raises(MissingMetric):
        lookup(c, CompUnit.FPU, Metric.AREA)


def test_bundled_model_is_finite_and_nonnegative(concrete):
    assert concrete.values
    for value in concrete.values.values():
        assert math.isfinite(value)
        assert value >= 0
    for m in concrete.mem_units:
        assert concrete.lookup(m, Metric.CAPACITY) > 0
        assert concrete.lookup(m, Metric.BANDWIDTH) > 0


def test_lookup_frequency(concrete):
    assert lookup(concrete, SocUnit.SOC, Metric.FREQUENCY) == 1e9


def test_specialize_equals_evaluate_everywhere(model, concrete, seed_assignment):
    for (unit, metric), e in model.entries.items():
        assert concrete.lookup(unit, metric) == evaluate(e, seed_assignment)


def test_systolic_array_area_and_throughput_monotone(model, seed_assignment):
    area = model.expr(CompUnit.SYSTOLIC_ARRAY, Metric.AREA)
    throughput = model.expr(CompUnit.SYSTOLIC_ARRAY, Metric.THROUGHPUT)
    previous = (0.0, 0.0)
    for side in (2, 4, 8, 16, 32, 64, 128):
        at = {**seed_assignment, "sysArrX": side, "sysArrY": side}
        current = (evaluate(area, at), evaluate(throughput, at))
        assert current[0] >= previous[0] and current[1] >= previous[1]
        previous = current


def test_default_bounds():
    assert default_bounds(2.0) == (0.2, 20.0)
    assert default_bounds(0.0) == (0.0, 1.0)


def test_param_spec_lattices():
    pid = ParamId("B", ParamKind.ARCH, ValueDomain.NATURAL)
    pow2 = ParamSpec(pid, 16, 1, 4096, Lattice.POW2)
    assert pow2.lattice_values() == [float(2**k) for k in range(13)]
    assert pow2.snap(90.0) == 64.0
    assert pow2.snap(100.0) == 128.0
    assert pow2.snap(1e9) == 4096.0
    assert len(pow2.lattice_values(limit=5)) == 5

    integer = ParamSpec.around(pid, 10.0)
    assert integer.lattice is Lattice.INTEGER
    assert integer.snap(2.4) == 2.0
    assert integer.snap(2.5) == 3.0
    assert integer.snap(-7.0) == 1.0


def test_with_overrides(toy_model):
    h = toy_model.with_overrides({"cellReadPower": 4.0})
    assert h.param_table["cellReadPower"].seed == 4.0
    with pytest.raises(ValidationError):
        toy_model.with_overrides({"nope": 1.0})
    with pytest.raises(OutOfBounds):
        toy_model.with_overrides({"cellReadPower": 1e9})


def test_render_concrete_line_format(toy_model):
    c = specialize(toy_model, {"cellReadPower": 2.0, "cellReadLatency": 3.0}, {})
    assert render_concrete(c) == "mainMem.readEnergy = 6 # nJ/access\n"


def test_metric_alias_and_keys():
    assert parse_metric("intPower") is Metric.INT_ENERGY
    assert parse_metric_key("globalBuf.readEnergy") == (MemUnit.GLOBAL_BUF, Metric.READ_ENERGY)
    with pytest.raises(ValueError):
        parse_metric_key("vector.capacity")
