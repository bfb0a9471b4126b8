from diffhw.hwmodel.model import (
    ConcreteHardwareModel,
    HardwareModel,
    Lattice,
    ParamSpec,
    concrete_to_frame,
    default_bounds,
    lookup,
    render_concrete,
    specialize,
)
from diffhw.hwmodel.units import (
    ALL_UNITS,
    COMPUTE_METRICS,
    MEMORY_METRICS,
    METRIC_ALIASES,
    METRIC_UNITS,
    SOC_METRICS,
    CompUnit,
    MemUnit,
    Metric,
    SocUnit,
    Unit,
    metric_key,
    metrics_for,
    parse_metric,
    parse_metric_key,
    parse_unit,
)

__all__ = [
    "ConcreteHardwareModel", "HardwareModel", "Lattice", "ParamSpec", "concrete_to_frame",
    "default_bounds", "lookup", "render_concrete", "specialize", "ALL_UNITS",
    "COMPUTE_METRICS", "MEMORY_METRICS", "METRIC_ALIASES", "METRIC_UNITS", "SOC_METRICS",
    "CompUnit", "MemUnit", "Metric", "SocUnit", "Unit", "metric_key", "metrics_for",
    "parse_metric", "parse_metric_key", "parse_unit",
]
