"""DSim : runtime, énergie, puissance et surface à partir d'un placement."""
from diffhw.dsim.estimate import (
    LEAK_TO_NJ,
    TIME_SYMBOL,
    MetricFn,
    PerfEstimate,
    SymbolicEstimate,
    build_estimate,
    concrete_metric,
    estimate,
    estimate_over_metrics,
    estimate_symbolic,
    metric_symbol,
    symbolic_cycles,
    tmec,
    tmec_expr,
    tmec_partials,
)
from diffhw.dsim.report import render_report, report_frame, workload_tilings, write_report

__all__ = [
    "LEAK_TO_NJ", "TIME_SYMBOL", "MetricFn", "PerfEstimate", "SymbolicEstimate", "build_estimate",
    "concrete_metric", "estimate", "estimate_over_metrics", "estimate_symbolic", "metric_symbol",
    "symbolic_cycles", "tmec", "tmec_expr", "tmec_partials", "render_report", "report_frame",
    "workload_tilings", "write_report",
]
