import pytest

from diffhw.dgen import (
    derive_memory_model,
    dump_model,
    generate,
    load_device_library,
    load_template_library,
    parse_arch,
    parse_model,
    parse_tech,
    build_model,
    derive_compute_model,
)
from diffhw.errors import ParseError, UnsupportedMemType, ValidationError
from diffhw.expr import const, diff, evaluate
from diffhw.hwmodel import CompUnit, MemUnit, Metric, SocUnit

ARCH = """
[SoC]
frequency = 1e9

[localMem]
type = sram
capacity = 8192
bankSize = 1024
nReadPorts = 1

[globalBuf]
type = sram
capacity = 65536
bankSize = 4096
nReadPorts = 2

[vector]
vectN = 8
"""


@pytest.fixture(scope="module")
def libraries():
    mem_lib, prims = load_device_library()
    return mem_lib, prims, load_template_library()


def test_bundled_model_entry_count(model):
    assert len(model.mem_units) == 2
    assert len(model.comp_units) == 3
    assert len(model.entries) == 2 * 8 + 3 * 5 + 1
    assert (SocUnit.SOC, Metric.FREQUENCY) in model.entries


def test_every_param_in_table_with_bounds(model):
    names = set()
    for e in model.entries.values():
        names |= e.params
    assert names <= model.param_table.keys()
    for spec in model.param_table.values():
        assert spec.lower <= spec.seed <= spec.upper


def test_arch_bounds_and_lattice_applied(model):
    spec = model.param_table["globalBuf.capacity"]
    assert (spec.lower, spec.upper) == (4096.0, 1048576.0)
    assert spec.lattice.value == "pow2"
    assert model.param_table["sram.cellReadPower"].seed == 5.0


def test_memory_units_get_scoped_params(libraries):
    mem_lib, _, _ = libraries
    spec = parse_arch(ARCH)
    local = derive_memory_model(spec, mem_lib, MemUnit.LOCAL_MEM, Metric.LEAKAGE_POWER)
    glob = derive_memory_model(spec, mem_lib, MemUnit.GLOBAL_BUF, Metric.LEAKAGE_POWER)
    assert "localMem.capacity" in local.params and "globalBuf.capacity" not in local.params
    assert "globalBuf.capacity" in glob.params
    # même type, mêmes paramètres technologiques
    assert "sram.cellLeakagePower" in local.params & glob.params


def test_derive_memory_follows_library(libraries):
    mem_lib, _, _ = libraries
    spec = parse_arch(ARCH)
    e = derive_memory_model(spec, mem_lib, MemUnit.GLOBAL_BUF, Metric.READ_ENERGY)
    lib = mem_lib.formula("sram", Metric.READ_ENERGY)
    at = {**mem_lib.seeds["sram"], "bankSize": 4096}
    scoped = {f"sram.{k}": v for k, v in mem_lib.seeds["sram"].items()}
    scoped["globalBuf.bankSize"] = 4096
    assert evaluate(e, scoped) == evaluate(lib, at)


def test_dram_read_latency_exceeds_sram(libraries):
    mem_lib, _, _ = libraries
    arch = {"capacity": 65536, "bankSize": 4096, "nReadPorts": 1}
    sram = evaluate(mem_lib.formula("sram", Metric.READ_LATENCY), {**mem_lib.seeds["sram"], **arch})
    dram = evaluate(mem_lib.formula("dram", Metric.READ_LATENCY), {**mem_lib.seeds["dram"], **arch})
    assert dram > sram


def test_systolic_area_template(libraries):
    _, _, templ = libraries
    prims = {"mult.area": const(1.0), "adder.area": const(0.5), "ff.area": const(0.25)}
    area = templ.compose(CompUnit.SYSTOLIC_ARRAY, Metric.AREA, prims)
    assert evaluate(area, {"sysArrX": 2, "sysArrY": 2, "sysArrN": 1}) == 7.0


def test_compute_model_binds_template_markers(libraries):
    _, prims, templ = libraries
    area = derive_compute_model(parse_arch(ARCH), prims, templ, CompUnit.VECTOR, Metric.AREA)
    assert {"mult.area", "adder.area", "ff.area"}.isdisjoint(area.params)
    assert "logic.node" in area.params
    assert {"vectN", "vectDataWidth"} <= set(area.params)


def test_vector_throughput_template(libraries):
    _, _, templ = libraries
    assert evaluate(templ.rule(CompUnit.VECTOR, Metric.THROUGHPUT), {"vectN": 8}) == 8


def test_mac_tree_latency_grows_with_primitive_latency(libraries):
    _, _, templ = libraries
    latency = templ.rule(CompUnit.MAC_TREE, Metric.LATENCY)
    at = {"mult.latency": 3e-10, "adder.latency": 1e-10, "mTreeX": 4, "mTreeY": 4}
    d = evaluate(diff(latency, "adder.latency"), at)
    h = 1e-12
    hi, lo = dict(at), dict(at)
    hi["adder.latency"] += h
    lo["adder.latency"] -= h
    fd = (evaluate(latency, hi) - evaluate(latency, lo)) / (2 * h)
    assert d > 0
    assert d == pytest.approx(fd, rel=1e-6)


def test_generated_expressions_pass_finite_differences(model, seed_assignment):
    for (unit, metric), e in model.entries.items():
        for name in sorted(e.params):
            x = seed_assignment[name]
            h = 1e-6 * abs(x)
            hi, lo = dict(seed_assignment), dict(seed_assignment)
            hi[name], lo[name] = x + h, x - h
            fd = (evaluate(e, hi) - evaluate(e, lo)) / (2 * h)
            got = evaluate(diff(e, name), seed_assignment)
            assert abs(got - fd) / max(1.0, abs(fd)) <= 1e-6, f"{unit.value}.{metric.value} / {name}"


def test_missing_memory_type_is_validation_error():
    text = ARCH.replace("type = sram\ncapacity = 65536", "capacity = 65536")
    with pytest.raises(ValidationError) as exc:
        parse_arch(text)
    assert "globalBuf.type" in exc.value.missing


def test_missing_frequency_is_validation_error():
    with pytest.raises(ValidationError) as exc:
        parse_arch(ARCH.replace("frequency = 1e9", ""))
    assert "SoC.frequency" in exc.value.missing


def test_arch_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_arch(ARCH + "\n[tensorCore]\nn = 1\n")
    assert exc.value.line is not None
    with pytest.raises(ParseError):
        parse_arch(ARCH.replace("vectN = 8", "vectN = huit"))
    with pytest.raises(ParseError):
        parse_arch(ARCH + "\n[vector]\nvectN = 4\n")


def test_unsupported_memory_type():
    spec = parse_arch(ARCH.replace("type = sram\ncapacity = 8192", "type = flash\ncapacity = 8192"))
    with pytest.raises(UnsupportedMemType):
        build_model(spec, parse_tech(""))


def test_unknown_tech_parameter():
    with pytest.raises(ValidationError) as exc:
        build_model(parse_arch(ARCH), parse_tech("[sram]\ncellColour = 3\n"))
    assert "sram.cellColour" in exc.value.missing


def test_model_file_roundtrip_and_determinism(arch_path, tech_path, model):
    text = dump_model(model)
    assert dump_model(parse_model(text)) == text
    assert dump_model(generate(arch_path, tech_path)) == text
