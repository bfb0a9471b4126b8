"""Unités matérielles, métriques et leurs unités physiques."""
from __future__ import annotations

from enum import Enum
from typing import Dict, Tuple, Union


class MemUnit(str, Enum):
    LOCAL_MEM = "localMem"
    GLOBAL_BUF = "globalBuf"
    MAIN_MEM = "mainMem"


class CompUnit(str, Enum):
    SYSTOLIC_ARRAY = "systolicArray"
    VECTOR = "vector"
    MAC_TREE = "macTree"
    FPU = "fpu"


class SocUnit(str, Enum):
    SOC = "SoC"


Unit = Union[MemUnit, CompUnit, SocUnit]


class Metric(str, Enum):
    READ_LATENCY = "readLatency"
    WRITE_LATENCY = "writeLatency"
    READ_ENERGY = "readEnergy"
    WRITE_ENERGY = "writeEnergy"
    LEAKAGE_POWER = "leakagePower"
    AREA = "area"
    CAPACITY = "capacity"
    BANDWIDTH = "bandwidth"
    INT_ENERGY = "intEnergy"
    LATENCY = "latency"
    THROUGHPUT = "throughput"
    FREQUENCY = "frequency"


MEMORY_METRICS: Tuple[Metric, ...] = (
    Metric.READ_LATENCY,
    Metric.WRITE_LATENCY,
    Metric.READ_ENERGY,
    Metric.WRITE_ENERGY,
    Metric.LEAKAGE_POWER,
    Metric.AREA,
    Metric.CAPACITY,
    Metric.BANDWIDTH,
)
COMPUTE_METRICS: Tuple[Metric, ...] = (
    Metric.INT_ENERGY,
    Metric.LEAKAGE_POWER,
    Metric.LATENCY,
    Metric.AREA,
    Metric.THROUGHPUT,
)
SOC_METRICS: Tuple[Metric, ...] = (Metric.FREQUENCY,)

METRIC_ALIASES: Dict[str, Metric] = {"intPower": Metric.INT_ENERGY}

METRIC_UNITS: Dict[Metric, str] = {
    Metric.READ_LATENCY: "s/access",
    Metric.WRITE_LATENCY: "s/access",
    Metric.READ_ENERGY: "nJ/access",
    Metric.WRITE_ENERGY: "nJ/access",
    Metric.LEAKAGE_POWER: "mW",
    Metric.AREA: "mm2",
    Metric.CAPACITY: "bytes",
    Metric.BANDWIDTH: "bytes/cycle",
    Metric.INT_ENERGY: "nJ/op",
    Metric.LATENCY: "s/op",
    Metric.THROUGHPUT: "ops/cycle",
    Metric.FREQUENCY: "Hz",
}

# Métriques qui doivent rester strictement positives après spécialisation
POSITIVE_METRICS = frozenset({Metric.CAPACITY, Metric.BANDWIDTH, Metric.THROUGHPUT, Metric.FREQUENCY})

ALL_UNITS: Tuple[Unit, ...] = (*MemUnit, *CompUnit, *SocUnit)


def unit_order(unit: Unit) -> int:
    return ALL_UNITS.index(unit)


def parse_unit(name: str) -> Unit:
    for enum in (MemUnit, CompUnit, SocUnit):
        try:
            return enum(name)
        except ValueError:
            continue
    raise ValueError(f"unité inconnue: {name!r}")


def parse_metric(name: str) -> Metric:
    if name in METRIC_ALIASES:
        return METRIC_ALIASES[name]
    try:
        return Metric(name)
    except ValueError:
        raise ValueError(f"métrique inconnue: {name!r}") from None


def metrics_for(unit: Unit) -> Tuple[Metric, ...]:
    if isinstance(unit, MemUnit):
        return MEMORY_METRICS
    if isinstance(unit, CompUnit):
        return COMPUTE_METRICS
    return SOC_METRICS


def metric_key(unit: Unit, metric: Metric) -> str:
    return f"{unit.value}.{metric.value}"


def parse_metric_key(key: str) -> Tuple[Unit, Metric]:
    unit_name, sep, metric_name = key.partition(".")
    if not sep:
        raise ValueError(f"clé attendue sous la forme unit.metric: {key!r}")
    unit = parse_unit(unit_name)
    metric = parse_metric(metric_name)
    if metric not in metrics_for(unit):
        raise ValueError(f"métrique {metric.value} invalide pour {unit.value}")
    return unit, metric
