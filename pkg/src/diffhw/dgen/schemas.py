"""Schémas des fichiers d'architecture et de technologie."""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from diffhw.errors import ParseError, ValidationError, from_pydantic
from diffhw.dgen.sections import Section, parse_number, parse_sections
from diffhw.hwmodel import CompUnit, Lattice, MemUnit, SocUnit
from diffhw.utils.io import read_text

PathLike = Union[str, Path]


class MemorySpec(BaseModel):
    unit: MemUnit
    mem_type: str
    capacity: int = Field(gt=0)
    bankSize: int = Field(gt=0)
    nReadPorts: int = Field(ge=1)

    @model_validator(mode="after")
    def bank_fits(self) -> "MemorySpec":
        if self.bankSize > self.capacity:
            raise ValueError(f"bankSize ({self.bankSize}) > capacity ({self.capacity})")
        return self


class ComputeSpec(BaseModel):
    unit: CompUnit
    params: Dict[str, float] = Field(default_factory=dict)

    @field_validator("params")
    @classmethod
    def positive(cls, v: Dict[str, float]) -> Dict[str, float]:
        bad = [k for k, x in v.items() if x <= 0 or float(x) != int(x)]
        if bad:
            raise ValueError(f"entiers strictement positifs attendus: {', '.join(bad)}")
        return v


class ArchSpec(BaseModel):
    frequency: float = Field(gt=0)
    memories: List[MemorySpec]
    computes: List[ComputeSpec]
    bounds: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    lattice: Dict[str, Lattice] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_units(self) -> "ArchSpec":
        if not self.memories or not self.computes:
            raise ValueError("au moins une unité mémoire et une unité de calcul sont requises")
        for lo, hi in self.bounds.values():
            if lo > hi:
                raise ValueError(f"bornes inversées: {lo} > {hi}")
        return self

    @property
    def mem_units(self) -> List[MemUnit]:
        return [m.unit for m in sorted(self.memories, key=lambda m: list(MemUnit).index(m.unit))]

    @property
    def comp_units(self) -> List[CompUnit]:
        return [c.unit for c in sorted(self.computes, key=lambda c: list(CompUnit).index(c.unit))]

    @property
    def mem_type(self) -> Dict[MemUnit, str]:
        return {m.unit: m.mem_type for m in self.memories}

    def memory(self, unit: MemUnit) -> MemorySpec:
        for m in self.memories:
            if m.unit is unit:
                return m
        raise KeyError(unit)

    def compute(self, unit: CompUnit) -> ComputeSpec:
        for c in self.computes:
            if c.unit is unit:
                return c
        raise KeyError(unit)


class TechSpec(BaseModel):
    logic: Dict[str, float] = Field(default_factory=dict)
    memory: Dict[str, Dict[str, float]] = Field(default_factory=dict)


def _numbers(section: Section) -> Dict[str, float]:
    return {k: parse_number(e.value, e.line) for k, e in section.entries.items()}


def parse_arch(text: str, path: Optional[PathLike] = None) -> ArchSpec:
    """Lit une description d'architecture (sections SoC / mémoires / calcul)."""
    frequency: Optional[float] = None
    memories: List[dict] = []
    computes: List[dict] = []
    bounds: Dict[str, Tuple[float, float]] = {}
    lattice: Dict[str, str] = {}
    missing: List[str] = []

    for section in parse_sections(text, path):
        name = section.name
        if name == SocUnit.SOC.value:
            frequency = section.number("frequency")
            if frequency is None:
                missing.append("SoC.frequency")
        elif name in MemUnit._value2member_map_:
            entry = section.get("type")
            if entry is None:
                missing.append(f"{name}.type")
                continue
            values: Dict[str, object] = {"unit": name, "mem_type": entry.value}
            for key in ("capacity", "bankSize", "nReadPorts"):
                value = section.number(key)
                if value is None:
                    missing.append(f"{name}.{key}")
                else:
                    values[key] = value
            extra = set(section.entries) - {"type", "capacity", "bankSize", "nReadPorts"}
            if extra:
                key = sorted(extra)[0]
                raise ParseError(f"clé inconnue dans [{name}]: {key}", section.entries[key].line, path)
            memories.append(values)
        elif name in CompUnit._value2member_map_:
            computes.append({"unit": name, "params": _numbers(section)})
        elif name == "bounds":
            for key, entry in section.entries.items():
                parts = [p.strip() for p in entry.value.split(",")]
                if len(parts) != 2:
                    raise ParseError(f"bornes attendues sous la forme `lo, hi`: {entry.value!r}", entry.line, path)
                bounds[key] = (parse_number(parts[0], entry.line), parse_number(parts[1], entry.line))
        elif name == "lattice":
            for key, entry in section.entries.items():
                if entry.value not in Lattice._value2member_map_:
                    raise ParseError(f"treillis inconnu: {entry.value!r}", entry.line, path)
                lattice[key] = entry.value
        else:
            raise ParseError(f"section inconnue: [{name}]", section.line, path)

    if frequency is None and "SoC.frequency" not in missing:
        missing.append("SoC.frequency")
    if missing:
        raise ValidationError("description d'architecture incomplète", missing=missing)
    try:
        return ArchSpec(frequency=frequency, memories=memories, computes=computes, bounds=bounds, lattice=lattice)
    except PydanticValidationError as exc:
        raise from_pydantic(exc) from None


def parse_tech(text: str, path: Optional[PathLike] = None) -> TechSpec:
    logic: Dict[str, float] = {}
    memory: Dict[str, Dict[str, float]] = {}
    for section in parse_sections(text, path):
        if section.name == "logic":
            logic = _numbers(section)
        else:
            memory[section.name] = _numbers(section)
    return TechSpec(logic=logic, memory=memory)


def load_arch(path: PathLike) -> ArchSpec:
    return parse_arch(read_text(path), path)


def load_tech(path: PathLike) -> TechSpec:
    return parse_tech(read_text(path), path)
