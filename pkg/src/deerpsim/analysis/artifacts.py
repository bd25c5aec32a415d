"""
Run artifacts on disk.

Layout of a run directory::

    manifest.json          full flat config, flows, assignment, digests, counters
    metrics.csv            one RunMetrics row
    energy.csv             final per-node accounts
    flows.csv              per-flow delivery ratio
    traces/                only with tracing enabled
        events.log
        trajectories.csv
        energy_samples.csv
        modes.csv
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from .. import __version__
from ..core.simulation import RunResult
from ..core.traffic import flows_table
from ..utils.file_utils import ensure_directory, write_json
from ..utils.logging_config import get_logger
from .metrics import RunMetrics, aggregate

logger = get_logger(__name__)

FLOW_COLUMNS = ["flow_id", "src", "dst", "payload_bytes", "rate", "start_at", "stop_at"]


def build_manifest(result: RunResult, metrics: RunMetrics) -> Dict[str, Any]:
    """Everything needed to reproduce the run, plus its stream digests."""
    return {
        "deerpsim_version": __version__,
        "protocol": result.config.protocol,
        "seed": result.config.seed,
        "config": result.config.to_flat(),
        "assignment": result.assignment.to_dict() if result.assignment else None,
        "flows": flows_table(result.flows),
        "digests": {
            "mobility": result.mobility_digest,
            "traffic": result.traffic_digest,
        },
        "events_processed": result.summary.events_processed,
        "counters": result.counters,
        "deaths": [{"node": n, "at": t} for n, t in result.deaths],
        "summary": {
            "originated": metrics.originated,
            "delivered": metrics.delivered,
            "pdr": metrics.pdr,
        },
    }


def write_run_artifacts(
    result: RunResult,
    out_dir: Union[str, Path],
    metrics: Optional[RunMetrics] = None,
) -> Dict[str, str]:
    """Write a run's artifacts; returns artifact name to path."""
    out = ensure_directory(out_dir)
    metrics = metrics or aggregate(result)
    files: Dict[str, str] = {}

    manifest = build_manifest(result, metrics)
    files["manifest"] = str(write_json(out / "manifest.json", manifest))

    metrics_path = out / "metrics.csv"
    metrics.to_frame().to_csv(metrics_path, index=False)
    files["metrics"] = str(metrics_path)

    energy_path = out / "energy.csv"
    result.energy.to_csv(energy_path, index=False)
    files["energy"] = str(energy_path)

    flows_path = out / "flows.csv"
    flows = pd.DataFrame(flows_table(result.flows), columns=FLOW_COLUMNS)
    flows["pdr"] = flows["flow_id"].map(metrics.flow_pdr)
    flows.to_csv(flows_path, index=False)
    files["flows"] = str(flows_path)

    if result.config.trace.enabled or result.event_log is not None:
        traces = ensure_directory(out / "traces")
        if result.event_log is not None:
            events_path = traces / "events.log"
            events = "".join(line + "\n" for line in result.event_log)
            events_path.write_text(events, encoding="utf-8")
            files["events"] = str(events_path)
        if result.trajectories is not None:
            path = traces / "trajectories.csv"
            result.trajectories.to_csv(path, index=False)
            files["trajectories"] = str(path)
        if result.energy_samples is not None:
            path = traces / "energy_samples.csv"
            result.energy_samples.to_csv(path, index=False)
            files["energy_samples"] = str(path)
        if result.config.trace.enabled:
            path = traces / "modes.csv"
            result.modes_table().to_csv(path, index=False)
            files["modes"] = str(path)

    logger.info(f"Wrote {len(files)} run artifacts to {out}")
    return files
