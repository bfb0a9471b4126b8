"""Bibliothèques de modèles de dispositifs et de gabarits d'accélérateurs."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import yaml

from diffhw.errors import MissingMetric, ParseError, UnsupportedMemType, UnsupportedTemplate, ValidationError
from diffhw.expr import Expr, ParamId, ParamKind, ValueDomain, bind, const, parse
from diffhw.hwmodel import COMPUTE_METRICS, MEMORY_METRICS, CompUnit, Metric, parse_metric

logger = logging.getLogger(__name__)

PRIMITIVES = ("adder", "ff", "mult")
PRIMITIVE_METRICS = (Metric.LATENCY, Metric.INT_ENERGY, Metric.LEAKAGE_POWER, Metric.AREA)
MEM_ARCH_PARAMS = ("capacity", "bankSize", "nReadPorts")

DEFAULT_DEVICES = "devices_40nm.yaml"
DEFAULT_TEMPLATES = "templates.yaml"

PathLike = Union[str, Path]


def _load_yaml(path: Optional[PathLike], default: str) -> Dict[str, Any]:
    if path is None:
        text = resources.files("diffhw.dgen").joinpath("data", default).read_text(encoding="utf-8")
        source = f"<{default}>"
    else:
        p = Path(path)
        if not p.exists():
            raise FileNotFoundError(f"Fichier non trouvé: {p}")
        text = p.read_text(encoding="utf-8")
        source = str(p)
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        line = getattr(getattr(exc, "problem_mark", None), "line", None)
        raise ParseError(f"YAML invalide: {exc}", None if line is None else line + 1, source) from None
    if not isinstance(data, dict):
        raise ParseError("document YAML attendu sous forme de dictionnaire", None, source)
    return data


def _resolver(
    params: Dict[str, ParamId],
    constants: Dict[str, float],
    where: str,
) -> Callable[[str], Union[ParamId, Expr]]:
    def resolve(name: str) -> Union[ParamId, Expr]:
        if name in constants:
            return const(constants[name])
        if name in params:
            return params[name]
        raise ParseError(f"{where}: nom inconnu {name!r}")

    return resolve


@dataclass(frozen=True)
class DeviceMemLib:
    """(type mémoire, métrique) → expression sur des noms génériques.

    Les paramètres technologiques portent leur nom nu (`cellReadPower`), les
    paramètres architecturaux `capacity`, `bankSize`, `nReadPorts`.
    """

    formulas: Dict[str, Dict[Metric, Expr]]
    seeds: Dict[str, Dict[str, float]]

    @property
    def types(self) -> list[str]:
        return list(self.formulas)

    def formula(self, mem_type: str, metric: Metric) -> Expr:
        if mem_type not in self.formulas:
            raise UnsupportedMemType(f"type mémoire non supporté: {mem_type!r} (connus: {', '.join(self.types)})")
        try:
            return self.formulas[mem_type][metric]
        except KeyError:
            raise MissingMetric(mem_type, metric.value) from None


@dataclass(frozen=True)
class DevicePrimLib:
    """(primitive, métrique) → expression sur wireCap / wireResist / node."""

    formulas: Dict[str, Dict[Metric, Expr]]
    seeds: Dict[str, float]

    def formula(self, primitive: str, metric: Metric) -> Expr:
        try:
            return self.formulas[primitive][metric]
        except KeyError:
            raise MissingMetric(primitive, metric.value) from None


@dataclass(frozen=True)
class AccelTemplateLib:
    """Règles de composition : expressions dont les `prim.metric` sont des marqueurs."""

    rules: Dict[CompUnit, Dict[Metric, Expr]]
    arch_defaults: Dict[CompUnit, Dict[str, float]]

    def rule(self, unit: CompUnit, metric: Metric) -> Expr:
        if unit not in self.rules:
            raise UnsupportedTemplate(f"aucun gabarit pour l'unité {unit.value}")
        try:
            return self.rules[unit][metric]
        except KeyError:
            raise UnsupportedTemplate(f"gabarit {unit.value} sans règle pour {metric.value}") from None

    def compose(self, unit: CompUnit, metric: Metric, prims: Dict[str, Expr]) -> Expr:
        """Remplace les marqueurs `prim.metric` par les expressions fournies."""
        return bind(self.rule(unit, metric), prims)


def load_device_library(path: Optional[PathLike] = None) -> tuple[DeviceMemLib, DevicePrimLib]:
    """Charge la table de dispositifs (par défaut, celle livrée avec le paquet)."""
    data = _load_yaml(path, DEFAULT_DEVICES)
    memory = data.get("memory") or {}
    logic = data.get("logic") or {}
    absent = [k for k, v in (("memory.types", memory.get("types")), ("logic.primitives", logic.get("primitives"))) if not v]
    if absent:
        raise ValidationError("bibliothèque de dispositifs incomplète", missing=absent)

    arch_names = list(memory.get("arch_params") or MEM_ARCH_PARAMS)
    arch_ids = {n: ParamId(n, ParamKind.ARCH, ValueDomain.NATURAL) for n in arch_names}
    shared = memory.get("formulas") or {}

    mem_formulas: Dict[str, Dict[Metric, Expr]] = {}
    mem_seeds: Dict[str, Dict[str, float]] = {}
    for mem_type, block in memory["types"].items():
        block = block or {}
        seeds = {k: float(v) for k, v in (block.get("seeds") or {}).items()}
        constants = {k: float(v) for k, v in (block.get("constants") or {}).items()}
        params = {**{n: ParamId(n) for n in seeds}, **arch_ids}
        texts = {**shared, **(block.get("formulas") or {})}
        formulas: Dict[Metric, Expr] = {}
        for metric_name, text in texts.items():
            metric = parse_metric(metric_name)
            formulas[metric] = parse(str(text), _resolver(params, constants, f"{mem_type}.{metric_name}"))
        missing = [f"{mem_type}.{m.value}" for m in MEMORY_METRICS if m not in formulas]
        if missing:
            raise ValidationError("formules mémoire manquantes", missing=missing)
        mem_formulas[mem_type] = formulas
        mem_seeds[mem_type] = seeds

    logic_seeds = {k: float(v) for k, v in (logic.get("seeds") or {}).items()}
    logic_params = {n: ParamId(n) for n in logic_seeds}
    prim_formulas: Dict[str, Dict[Metric, Expr]] = {}
    for prim, block in logic["primitives"].items():
        prim_formulas[prim] = {
            parse_metric(m): parse(str(t), _resolver(logic_params, {}, f"{prim}.{m}"))
            for m, t in (block or {}).items()
        }
    missing = [f"{p}.{m.value}" for p in PRIMITIVES for m in PRIMITIVE_METRICS if m not in prim_formulas.get(p, {})]
    if missing:
        raise ValidationError("formules de primitives manquantes", missing=missing)

    logger.debug(f"Bibliothèque de dispositifs: types {list(mem_formulas)}, primitives {list(prim_formulas)}")
    return DeviceMemLib(mem_formulas, mem_seeds), DevicePrimLib(prim_formulas, logic_seeds)


def load_template_library(path: Optional[PathLike] = None) -> AccelTemplateLib:
    data = _load_yaml(path, DEFAULT_TEMPLATES)
    markers = {
        f"{p}.{m.value}": ParamId(f"{p}.{m.value}") for p in PRIMITIVES for m in PRIMITIVE_METRICS
    }
    rules: Dict[CompUnit, Dict[Metric, Expr]] = {}
    defaults: Dict[CompUnit, Dict[str, float]] = {}
    for unit_name, block in data.items():
        try:
            unit = CompUnit(unit_name)
        except ValueError:
            raise UnsupportedTemplate(f"unité de calcul inconnue dans les gabarits: {unit_name!r}") from None
        block = block or {}
        arch = {k: float(v) for k, v in (block.get("arch") or {}).items()}
        params = {**markers, **{n: ParamId(n, ParamKind.ARCH, ValueDomain.NATURAL) for n in arch}}
        rules[unit] = {
            parse_metric(m): parse(str(t), _resolver(params, {}, f"{unit_name}.{m}"))
            for m, t in (block.get("metrics") or {}).items()
        }
        missing = [f"{unit_name}.{m.value}" for m in COMPUTE_METRICS if m not in rules[unit]]
        if missing:
            raise ValidationError("règles de gabarit manquantes", missing=missing)
        defaults[unit] = arch
    return AccelTemplateLib(rules, defaults)
