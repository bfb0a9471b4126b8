"""Dérivation du modèle matériel à partir de l'architecture et des bibliothèques."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from diffhw.errors import OutOfBounds, UnsupportedTemplate, ValidationError
from diffhw.expr import Expr, Param, ParamId, ParamKind, ValueDomain, rename
from diffhw.dgen.library import (
    MEM_ARCH_PARAMS,
    AccelTemplateLib,
    DeviceMemLib,
    DevicePrimLib,
    load_device_library,
    load_template_library,
)
from diffhw.dgen.schemas import ArchSpec, TechSpec, load_arch, load_tech
from diffhw.hwmodel import (
    COMPUTE_METRICS,
    MEMORY_METRICS,
    CompUnit,
    HardwareModel,
    MemUnit,
    Metric,
    ParamSpec,
    SocUnit,
    Unit,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
LOGIC_SCOPE = "logic"
FREQUENCY = ParamId("frequency", ParamKind.ARCH, ValueDomain.REAL)


def mem_arch_id(unit: MemUnit, name: str) -> ParamId:
    return ParamId(f"{unit.value}.{name}", ParamKind.ARCH, ValueDomain.NATURAL)


def tech_id(scope: str, name: str) -> ParamId:
    return ParamId(f"{scope}.{name}", ParamKind.TECH, ValueDomain.REAL)


def derive_memory_model(spec: ArchSpec, lib: DeviceMemLib, m: MemUnit, q: Metric) -> Expr:
    """H(m, q) = dmemlib(type(m), q), paramètres renommés et portés par l'unité."""
    if m not in spec.mem_type:
        raise ValidationError(f"unité mémoire absente de l'architecture: {m.value}")
    mem_type = spec.mem_type[m]
    e = lib.formula(mem_type, q)
    mapping = {n: mem_arch_id(m, n) for n in MEM_ARCH_PARAMS}
    mapping.update({n: tech_id(mem_type, n) for n in lib.seeds[mem_type]})
    return rename(e, mapping)


def primitive_expr(prims: DevicePrimLib, primitive: str, q: Metric) -> Expr:
    return rename(prims.formula(primitive, q), {n: tech_id(LOGIC_SCOPE, n) for n in prims.seeds})


def derive_compute_model(
    spec: ArchSpec,
    prims: DevicePrimLib,
    templ: AccelTemplateLib,
    c: CompUnit,
    q: Metric,
) -> Expr:
    """H(c, q) = composition du gabarit de c sur les primitives logiques."""
    if c not in spec.comp_units:
        raise ValidationError(f"unité de calcul absente de l'architecture: {c.value}")
    rule = templ.rule(c, q)
    markers: Dict[str, Expr] = {}
    for name in rule.params:
        primitive, sep, metric = name.partition(".")
        if sep:
            markers[name] = primitive_expr(prims, primitive, Metric(metric))
    return templ.compose(c, q, markers)


def _check_tech(spec: ArchSpec, tech: TechSpec, mem_lib: DeviceMemLib, prims: DevicePrimLib) -> None:
    unknown = [f"{LOGIC_SCOPE}.{k}" for k in tech.logic if k not in prims.seeds]
    for mem_type, values in tech.memory.items():
        known = mem_lib.seeds.get(mem_type)
        if known is None:
            unknown.append(f"[{mem_type}]")
            continue
        unknown += [f"{mem_type}.{k}" for k in values if k not in known]
    if unknown:
        raise ValidationError("paramètres technologiques inconnus", missing=unknown)


def _spec(
    pid: ParamId,
    seed: float,
    arch: ArchSpec,
) -> ParamSpec:
    bounds = arch.bounds.get(pid.name)
    spec = ParamSpec.around(pid, seed, bounds, arch.lattice.get(pid.name))
    if not spec.contains(spec.seed):
        raise OutOfBounds(pid.name, spec.seed, (spec.lower, spec.upper))
    return spec


def build_model(
    arch: ArchSpec,
    tech: TechSpec,
    mem_lib: Optional[DeviceMemLib] = None,
    prims: Optional[DevicePrimLib] = None,
    templ: Optional[AccelTemplateLib] = None,
) -> HardwareModel:
    if mem_lib is None or prims is None:
        mem_lib, prims = load_device_library()
    if templ is None:
        templ = load_template_library()
    _check_tech(arch, tech, mem_lib, prims)

    entries: Dict[Tuple[Unit, Metric], Expr] = {}
    table: Dict[str, ParamSpec] = {}

    for m in arch.mem_units:
        for q in MEMORY_METRICS:
            entries[(m, q)] = derive_memory_model(arch, mem_lib, m, q)
        mem = arch.memory(m)
        for n in MEM_ARCH_PARAMS:
            pid = mem_arch_id(m, n)
            table[pid.name] = _spec(pid, float(getattr(mem, n)), arch)
        mem_type = mem.mem_type
        for n, seed in mem_lib.seeds[mem_type].items():
            pid = tech_id(mem_type, n)
            if pid.name not in table:
                table[pid.name] = _spec(pid, tech.memory.get(mem_type, {}).get(n, seed), arch)

    for c in arch.comp_units:
        if c not in templ.arch_defaults:
            raise UnsupportedTemplate(f"aucun gabarit pour l'unité {c.value}")
        defaults = templ.arch_defaults[c]
        given = arch.compute(c).params
        unknown = [f"{c.value}.{k}" for k in given if k not in defaults]
        if unknown:
            raise ValidationError("paramètres architecturaux inconnus", missing=unknown)
        for q in COMPUTE_METRICS:
            entries[(c, q)] = derive_compute_model(arch, prims, templ, c, q)
        for n, seed in defaults.items():
            pid = ParamId(n, ParamKind.ARCH, ValueDomain.NATURAL)
            table[n] = _spec(pid, given.get(n, seed), arch)
    if arch.comp_units:
        for n, seed in prims.seeds.items():
            pid = tech_id(LOGIC_SCOPE, n)
            table[pid.name] = _spec(pid, tech.logic.get(n, seed), arch)

    entries[(SocUnit.SOC, Metric.FREQUENCY)] = Param(FREQUENCY)
    table[FREQUENCY.name] = _spec(FREQUENCY, arch.frequency, arch)

    stray = (set(arch.bounds) | set(arch.lattice)) - table.keys()
    if stray:
        raise ValidationError("bornes ou treillis pour des paramètres inconnus", missing=stray)

    model = HardwareModel(entries, dict(sorted(table.items())))
    logger.info(f"Modèle généré: {len(entries)} entrées, {len(table)} paramètres")
    return model


def generate(
    arch_file: PathLike,
    tech_file: PathLike,
    devices: Optional[PathLike] = None,
    templates: Optional[PathLike] = None,
) -> HardwareModel:
    """Lit les fichiers d'architecture et de technologie et produit H."""
    arch = load_arch(arch_file)
    tech = load_tech(tech_file)
    mem_lib, prims = load_device_library(devices)
    templ = load_template_library(templates)
    return build_model(arch, tech, mem_lib, prims, templ)
