"""Modèle matériel symbolique H et sa spécialisation en modèle concret."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from diffhw.errors import MissingMetric, OutOfBounds, UnboundParameter, ValidationError
from diffhw.expr import Expr, ParamId, ParamKind, ValueDomain, evaluate
from diffhw.hwmodel.units import (
    METRIC_UNITS,
    POSITIVE_METRICS,
    CompUnit,
    MemUnit,
    Metric,
    Unit,
    metric_key,
    unit_order,
)
from diffhw.settings import settings
from diffhw.utils.io import format_float

logger = logging.getLogger(__name__)

Entries = Dict[Tuple[Unit, Metric], Expr]


class Lattice(str, Enum):
    REAL = "real"
    INTEGER = "integer"
    POW2 = "pow2"


def default_bounds(seed: float, span: Optional[float] = None) -> Tuple[float, float]:
    """Bornes par défaut : seed/span .. seed·span (0 → [0, 1])."""
    span = span or settings.BOUND_SPAN
    if seed == 0:
        return 0.0, 1.0
    lo, hi = seed / span, seed * span
    return (lo, hi) if lo <= hi else (hi, lo)


@dataclass(frozen=True)
class ParamSpec:
    pid: ParamId
    seed: float
    lower: float
    upper: float
    lattice: Lattice = Lattice.REAL

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValidationError(f"bornes invalides pour {self.pid.name}: [{self.lower}, {self.upper}]")
        if self.pid.domain is ValueDomain.NATURAL and self.lattice is Lattice.REAL:
            object.__setattr__(self, "lattice", Lattice.INTEGER)

    @classmethod
    def around(
        cls,
        pid: ParamId,
        seed: float,
        bounds: Optional[Tuple[float, float]] = None,
        lattice: Optional[Lattice] = None,
    ) -> "ParamSpec":
        lo, hi = bounds if bounds is not None else default_bounds(seed)
        if lattice is None:
            lattice = Lattice.INTEGER if pid.domain is ValueDomain.NATURAL else Lattice.REAL
        return cls(pid, float(seed), float(lo), float(hi), lattice)

    @property
    def name(self) -> str:
        return self.pid.name

    @property
    def kind(self) -> ParamKind:
        return self.pid.kind

    @property
    def is_natural(self) -> bool:
        return self.pid.domain is ValueDomain.NATURAL

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def clamp(self, value: float) -> float:
        return min(max(value, self.lower), self.upper)

    def _integer_range(self) -> Tuple[int, int]:
        lo = math.ceil(self.lower)
        if self.is_natural:
            lo = max(lo, 1)
        return int(lo), int(math.floor(self.upper))

    def lattice_values(self, limit: Optional[int] = None) -> List[float]:
        """Valeurs admissibles d'un paramètre discret, dans l'ordre croissant.

        Avec `limit`, au plus `limit` valeurs régulièrement espacées (extrémités incluses).
        """
        if self.lattice is Lattice.POW2:
            lo = max(self.lower, 1.0)
            k_lo, k_hi = math.ceil(math.log2(lo)), math.floor(math.log2(self.upper)) if self.upper >= 1 else -1
            values = np.exp2(np.arange(k_lo, k_hi + 1, dtype=float))
        elif self.lattice is Lattice.INTEGER:
            lo, hi = self._integer_range()
            if hi < lo:
                return []
            if limit is not None and hi - lo + 1 > limit:
                return [float(v) for v in np.unique(np.round(np.linspace(lo, hi, limit)))]
            values = np.arange(lo, hi + 1, dtype=float)
        else:
            raise ValueError(f"{self.name} n'est pas discret")
        if limit is not None and len(values) > limit:
            values = values[np.unique(np.round(np.linspace(0, len(values) - 1, limit)).astype(int))]
        return [float(v) for v in values]

    def snap(self, value: float) -> float:
        """Projette une valeur relâchée sur le treillis, dans les bornes."""
        if self.lattice is Lattice.REAL:
            return self.clamp(value)
        if self.lattice is Lattice.INTEGER:
            lo, hi = self._integer_range()
            if hi < lo:
                return self.clamp(value)
            return float(min(max(math.floor(value + 0.5), lo), hi))
        values = self.lattice_values()
        if not values:
            return self.clamp(value)
        target = math.log2(max(value, values[0]))
        keyed = [abs(math.log2(v) - target) for v in values]
        return values[int(np.argmin(keyed))]


def _ordered(keys: Iterable[Tuple[Unit, Metric]]) -> List[Tuple[Unit, Metric]]:
    return sorted(keys, key=lambda k: (unit_order(k[0]), list(Metric).index(k[1])))


@dataclass(frozen=True)
class HardwareModel:
    """H : (unité, métrique) → expression, avec la table des paramètres."""

    entries: Entries
    param_table: Dict[str, ParamSpec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = set()
        for e in self.entries.values():
            missing |= e.params - self.param_table.keys()
        if missing:
            raise ValidationError("paramètres absents de la table", missing=missing)

    @classmethod
    def from_entries(
        cls,
        entries: Mapping[Tuple[Unit, Metric], Expr],
        seeds: Optional[Mapping[str, float]] = None,
    ) -> "HardwareModel":
        """Construit la table des paramètres avec les bornes par défaut."""
        from diffhw.expr import param_ids

        seeds = seeds or {}
        table: Dict[str, ParamSpec] = {}
        for e in entries.values():
            for name, pid in param_ids(e).items():
                if name not in table:
                    table[name] = ParamSpec.around(pid, seeds.get(name, 1.0))
        ordered = {k: entries[k] for k in _ordered(entries)}
        return cls(ordered, dict(sorted(table.items())))

    @property
    def units(self) -> List[Unit]:
        seen: List[Unit] = []
        for unit, _ in _ordered(self.entries):
            if unit not in seen:
                seen.append(unit)
        return seen

    @property
    def mem_units(self) -> List[MemUnit]:
        return [u for u in self.units if isinstance(u, MemUnit)]

    @property
    def comp_units(self) -> List[CompUnit]:
        return [u for u in self.units if isinstance(u, CompUnit)]

    def expr(self, unit: Unit, metric: Metric) -> Expr:
        try:
            return self.entries[(unit, metric)]
        except KeyError:
            raise MissingMetric(unit.value, metric.value) from None

    def params(self, kind: Optional[ParamKind] = None) -> List[ParamSpec]:
        return [s for s in self.param_table.values() if kind is None or s.kind is kind]

    def seed_assignment(self) -> Tuple[Dict[str, float], Dict[str, float]]:
        tech = {s.name: s.seed for s in self.params(ParamKind.TECH)}
        arch = {s.name: s.seed for s in self.params(ParamKind.ARCH)}
        return tech, arch

    def split_assignment(self, values: Mapping[str, float]) -> Tuple[Dict[str, float], Dict[str, float]]:
        tech = {k: v for k, v in values.items() if k in self.param_table and self.param_table[k].kind is ParamKind.TECH}
        arch = {k: v for k, v in values.items() if k in self.param_table and self.param_table[k].kind is ParamKind.ARCH}
        return tech, arch

    def with_overrides(self, values: Mapping[str, float]) -> "HardwareModel":
        """Remplace des valeurs de départ (noms connus, dans les bornes)."""
        unknown = set(values) - self.param_table.keys()
        if unknown:
            raise ValidationError("paramètres inconnus", missing=unknown)
        table = dict(self.param_table)
        for name, value in values.items():
            spec = table[name]
            if not spec.contains(value):
                raise OutOfBounds(name, value, (spec.lower, spec.upper))
            table[name] = replace(spec, seed=float(value))
        return HardwareModel(self.entries, table)


@dataclass(frozen=True)
class ConcreteHardwareModel:
    values: Dict[Tuple[Unit, Metric], float]
    model: Optional[HardwareModel] = None
    tech: Dict[str, float] = field(default_factory=dict)
    arch: Dict[str, float] = field(default_factory=dict)

    @property
    def assignment(self) -> Dict[str, float]:
        return {**self.tech, **self.arch}

    @property
    def units(self) -> List[Unit]:
        seen: List[Unit] = []
        for unit, _ in self.values:
            if unit not in seen:
                seen.append(unit)
        return seen

    @property
    def mem_units(self) -> List[MemUnit]:
        return [u for u in self.units if isinstance(u, MemUnit)]

    @property
    def comp_units(self) -> List[CompUnit]:
        return [u for u in self.units if isinstance(u, CompUnit)]

    def lookup(self, unit: Unit, metric: Metric) -> float:
        return lookup(self, unit, metric)

    def has(self, unit: Unit, metric: Metric) -> bool:
        return (unit, metric) in self.values

    def arch_value(self, name: str, default: Optional[float] = None) -> Optional[float]:
        return self.arch.get(name, default)


def specialize(
    h: HardwareModel,
    tech: Mapping[str, float],
    arch: Mapping[str, float],
) -> ConcreteHardwareModel:
    """Substitue les affectations dans chaque expression de H."""
    assignment = {**tech, **arch}
    needed = set()
    for e in h.entries.values():
        needed |= e.params
    missing = sorted(needed - assignment.keys())
    if missing:
        raise UnboundParameter(missing[0])
    for name, value in assignment.items():
        spec = h.param_table.get(name)
        if spec is None:
            continue
        if not spec.contains(value):
            raise OutOfBounds(name, value, (spec.lower, spec.upper))
        if spec.is_natural and (value < 0 or float(value) != math.floor(value)):
            raise ValidationError(f"{name} doit être un entier naturel, reçu {value!r}")

    values: Dict[Tuple[Unit, Metric], float] = {}
    for key in _ordered(h.entries):
        unit, metric = key
        value = evaluate(h.entries[key], assignment)
        if not math.isfinite(value):
            raise ValidationError(f"{metric_key(unit, metric)} non fini: {value!r}")
        if value < 0 or (metric in POSITIVE_METRICS and value <= 0):
            raise ValidationError(f"{metric_key(unit, metric)} hors domaine: {value!r}")
        values[key] = value
    logger.debug(f"Modèle spécialisé: {len(values)} métriques")
    return ConcreteHardwareModel(values, h, dict(tech), dict(arch))


def lookup(c: ConcreteHardwareModel, unit: Unit, metric: Metric) -> float:
    try:
        return c.values[(unit, metric)]
    except KeyError:
        raise MissingMetric(unit.value, metric.value) from None


def concrete_to_frame(c: ConcreteHardwareModel) -> pd.DataFrame:
    rows = [
        {"unit": u.value, "metric": m.value, "value": v, "units": METRIC_UNITS[m]}
        for (u, m), v in c.values.items()
    ]
    return pd.DataFrame(rows, columns=["unit", "metric", "value", "units"])


def render_concrete(c: ConcreteHardwareModel) -> str:
    """Rapport ligne à ligne : `unit.metric = valeur # unités`."""
    lines = [
        f"{metric_key(u, m)} = {format_float(v)} # {METRIC_UNITS[m]}"
        for (u, m), v in c.values.items()
    ]
    return "\n".join(lines) + ("\n" if lines else "")
