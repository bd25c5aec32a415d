"""
Reporting for deerpsim: per-run metrics, multi-seed protocol comparison,
CSV tables and SVG charts.
"""

from .artifacts import write_run_artifacts
from .comparison import ComparisonResult, compare, summarize
from .metrics import METRIC_COLUMNS, RunMetrics, aggregate
from .render import load_runs, render

__all__ = [
    "RunMetrics",
    "METRIC_COLUMNS",
    "aggregate",
    "ComparisonResult",
    "compare",
    "summarize",
    "render",
    "load_runs",
    "write_run_artifacts",
]
