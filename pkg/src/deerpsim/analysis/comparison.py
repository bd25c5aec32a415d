"""
Protocol comparison over seeds and sweep points.

Every cell (sweep point, protocol, seed) is an independent run with its own
engine, so cells can go to a process pool. For a fixed seed all protocols see
the same mobility and traffic streams.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from ..core.scenario import ScenarioConfig
from ..core.simulation import run_scenario
from ..protocols import normalize_protocol
from ..utils.error_handling import NoMatchingRowError, ValidationError
from ..utils.logging_config import get_logger
from .metrics import METRIC_COLUMNS, aggregate

logger = get_logger(__name__)

DIGEST_COLUMNS = ["mobility_digest", "traffic_digest"]
SUMMARY_COLUMNS = ["protocol", "node_count", "mean", "stddev", "n"]
SUMMARY_METRICS = [
    c
    for c in METRIC_COLUMNS
    if c not in ("protocol", "node_count", "seed", "first_death")
]
FAILURE_COLUMNS = ["protocol", "node_count", "seed", "error"]


@dataclass
class ComparisonResult:
    """Raw per-run rows plus the cells that could not run."""

    runs: pd.DataFrame
    failures: List[Dict[str, Any]] = field(default_factory=list)
    protocols: List[str] = field(default_factory=list)

    def summary(self, metric: str) -> pd.DataFrame:
        return summarize(self.runs, metric, self.protocols)

    def summaries(
        self, metrics: Optional[Sequence[str]] = None
    ) -> Dict[str, pd.DataFrame]:
        return {m: self.summary(m) for m in (metrics or SUMMARY_METRICS)}

    def failures_table(self) -> pd.DataFrame:
        return pd.DataFrame(self.failures, columns=FAILURE_COLUMNS)


def summarize(
    runs: pd.DataFrame, metric: str, protocols: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """Mean, sample stddev and count of ``metric`` per protocol and node count."""
    if metric not in runs.columns:
        raise ValidationError("metric", metric, f"Unknown metric: {metric}")
    if runs.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)

    grouped = runs.groupby(["protocol", "node_count"], sort=False)[metric]
    table = grouped.agg(
        mean="mean", stddev=lambda s: s.std(ddof=1), n="count"
    ).reset_index()

    order = list(protocols) if protocols else sorted(table["protocol"].unique())
    order += [p for p in table["protocol"].unique() if p not in order]
    table["protocol"] = pd.Categorical(
        table["protocol"], categories=order, ordered=True
    )
    table = table.sort_values(["node_count", "protocol"]).reset_index(drop=True)
    table["protocol"] = table["protocol"].astype(str)
    return table[SUMMARY_COLUMNS]


def plan_cells(
    config: ScenarioConfig, protocols: Sequence[str], seeds: Sequence[int]
) -> List[ScenarioConfig]:
    """One scenario per (sweep point, protocol, seed), in report order."""
    cells = []
    for point in config.expand():
        for protocol in protocols:
            for seed in seeds:
                cells.append(point.copy(protocol=protocol, seed=int(seed)))
    return cells


def run_cell(cell: ScenarioConfig) -> Dict[str, Any]:
    """Run one cell; an uncovered DEERP scenario comes back as a failure record."""
    try:
        result = run_scenario(cell)
    except NoMatchingRowError as e:
        failure = {
            "protocol": cell.protocol,
            "node_count": cell.node_count,
            "seed": cell.seed,
            "error": e.message,
        }
        return {"failure": failure}
    row = aggregate(result).to_row()
    row["mobility_digest"] = result.mobility_digest
    row["traffic_digest"] = result.traffic_digest
    return {"row": row}


def default_workers() -> int:
    return int(os.getenv("DEERPSIM_WORKERS", "1"))


def compare(
    config: ScenarioConfig,
    protocols: Sequence[str],
    seeds: Sequence[int],
    workers: Optional[int] = None,
) -> ComparisonResult:
    """Run every protocol on every seed and sweep point."""
    if not protocols:
        raise ValidationError(
            "protocols", protocols, "At least one protocol is required"
        )
    if not seeds:
        raise ValidationError("seeds", seeds, "At least one seed is required")
    protocols = [normalize_protocol(p) for p in protocols]
    workers = default_workers() if workers is None else workers

    cells = plan_cells(config, protocols, seeds)
    logger.info(
        f"Comparing {', '.join(protocols)} over {len(seeds)} seeds: "
        f"{len(cells)} runs, {workers} workers"
    )

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run_cell, cells))
    else:
        outcomes = [run_cell(cell) for cell in cells]

    rows = [o["row"] for o in outcomes if "row" in o]
    failures = [o["failure"] for o in outcomes if "failure" in o]
    for failure in failures:
        logger.warning(
            f"{failure['protocol']} with {failure['node_count']} nodes, "
            f"seed {failure['seed']}: {failure['error']}"
        )

    runs = pd.DataFrame(rows, columns=METRIC_COLUMNS + DIGEST_COLUMNS)
    logger.info(f"Comparison finished: {len(rows)} runs, {len(failures)} failed cells")
    return ComparisonResult(runs=runs, failures=failures, protocols=protocols)
