"""
Per-run measurements: network-average energy by mode plus the usual MANET
delivery metrics.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..core.models import DropCause
from ..core.simulation import RunResult
from ..utils.metrics import sum_counters

DROP_CAUSES = [cause.value for cause in DropCause]

# Column order of metrics.csv and of the comparison's raw runs table
METRIC_COLUMNS = [
    "protocol",
    "node_count",
    "seed",
    "energy_idle",
    "energy_tx",
    "energy_rx",
    "energy_sleep",
    "remaining",
    "pdr",
    "throughput",
    "mean_delay",
    "routing_overhead",
    "control_frames",
    "control_bytes",
    "nrl_bytes",
    "mean_hops",
    "originated",
    "delivered",
    *(f"drop_{c.replace('-', '_')}" for c in DROP_CAUSES),
    "buffered_at_end",
    "node_deaths",
    "first_death",
]

# Metrics that get a chart of their own
FIGURE_METRICS = {
    "energy_idle": "Avg. energy consumed in idle mode (mJ)",
    "energy_tx": "Avg. energy consumed in Tx mode (mJ)",
    "energy_rx": "Avg. energy consumed in Rx mode (mJ)",
    "remaining": "Avg. remaining energy (mJ)",
}


@dataclass
class RunMetrics:
    protocol: str
    node_count: int
    seed: int
    energy_idle: float
    energy_tx: float
    energy_rx: float
    energy_sleep: float
    remaining: float
    pdr: float
    throughput: float
    mean_delay: float
    routing_overhead: float
    control_frames: int
    control_bytes: int
    nrl_bytes: float
    mean_hops: float
    originated: int
    delivered: int
    drops: Dict[str, int] = field(default_factory=dict)
    buffered_at_end: int = 0
    node_deaths: int = 0
    first_death: Optional[float] = None
    flow_pdr: Dict[int, float] = field(default_factory=dict)
    per_node: Optional[pd.DataFrame] = field(default=None, repr=False, compare=False)

    @property
    def dropped(self) -> int:
        return sum(self.drops.values())

    def to_row(self) -> Dict[str, Any]:
        """Flat row in ``METRIC_COLUMNS`` order."""
        row: Dict[str, Any] = {}
        for key in METRIC_COLUMNS:
            if key.startswith("drop_"):
                row[key] = self.drops.get(key[len("drop_") :].replace("_", "-"), 0)
            else:
                row[key] = getattr(self, key)
        return row

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([self.to_row()], columns=METRIC_COLUMNS)


def _ratio(num: float, den: float) -> float:
    return num / den if den else math.nan


def aggregate(result: RunResult) -> RunMetrics:
    """Reduce a finished run to its ``RunMetrics``."""
    config = result.config
    ledger = result.ledger
    energy = result.energy
    counters = result.counters

    delivered = ledger.delivered()
    delays = np.array(
        [r.delivered_at - r.created_at for r in delivered], dtype=np.float64
    )
    hops = np.array([r.hops for r in delivered], dtype=np.float64)
    payload_bits = sum(r.payload_bytes * 8 for r in delivered)

    control_frames = sum_counters(counters, "control_frames")
    control_bytes = sum_counters(counters, "control_bytes")

    records = pd.DataFrame(
        [r.to_dict() for r in ledger.records.values()], columns=["flow_id", "fate"]
    )
    flow_pdr: Dict[int, float] = {}
    for flow in result.flows:
        fates = records.loc[records["flow_id"] == flow.flow_id, "fate"]
        delivered_share = (fates == "delivered").mean() if len(fates) else 0.0
        flow_pdr[flow.flow_id] = float(delivered_share)

    return RunMetrics(
        protocol=config.protocol,
        node_count=config.node_count,
        seed=config.seed,
        energy_idle=float(energy["idle_mJ"].mean()),
        energy_tx=float(energy["tx_mJ"].mean()),
        energy_rx=float(energy["rx_mJ"].mean()),
        energy_sleep=float(energy["sleep_mJ"].mean()),
        remaining=float(energy["remaining_mJ"].mean()),
        pdr=len(delivered) / ledger.originated if ledger.originated else 0.0,
        throughput=payload_bits / config.duration,
        mean_delay=float(delays.mean()) if delays.size else math.nan,
        routing_overhead=_ratio(control_frames, len(delivered)),
        control_frames=control_frames,
        control_bytes=control_bytes,
        nrl_bytes=_ratio(control_bytes, payload_bits / 8),
        mean_hops=float(hops.mean()) if hops.size else math.nan,
        originated=ledger.originated,
        delivered=len(delivered),
        drops={cause: ledger.count(cause) for cause in DROP_CAUSES},
        buffered_at_end=ledger.count("buffered"),
        node_deaths=len(result.deaths),
        first_death=min(t for _, t in result.deaths) if result.deaths else None,
        flow_pdr=flow_pdr,
        per_node=energy,
    )

