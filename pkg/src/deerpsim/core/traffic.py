"""Constant-bit-rate traffic."""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..utils.error_handling import InsufficientNodesError, ValidationError
from .rng import RngStream


@dataclass
class TrafficConfig:
    flows: Optional[int] = None  # None means max(1, N // 4)
    pairs: List[List[int]] = field(default_factory=list)
    payload_bytes: int = 512
    rate: float = 8.0
    start: float = 20.0
    stop: Optional[float] = None  # None means the run duration


@dataclass(frozen=True)
class CbrFlow:
    flow_id: int
    src: int
    dst: int
    payload_bytes: int = 512
    rate: float = 8.0
    start_at: float = 0.0
    stop_at: float = 0.0

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValidationError(
                "traffic.pairs",
                (self.src, self.dst),
                "Flow source and destination must differ",
            )
        if self.rate <= 0:
            raise ValidationError(
                "traffic.rate", self.rate, "Packet rate must be positive"
            )
        if self.stop_at < self.start_at:
            raise ValidationError(
                "traffic.stop", self.stop_at, "Flow stops before it starts"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def emit_schedule(flow: CbrFlow) -> np.ndarray:
    """Origination times ``start_at + k / rate`` falling in ``[start_at, stop_at)``."""
    count = int(math.ceil((flow.stop_at - flow.start_at) * flow.rate - 1e-9))
    if count <= 0:
        return np.empty(0, dtype=np.float64)
    times = flow.start_at + np.arange(count, dtype=np.float64) / flow.rate
    return times[times < flow.stop_at]


def default_flow_count(node_count: int) -> int:
    return max(1, node_count // 4)


def build_flows(
    node_count: int,
    config: TrafficConfig,
    rng: RngStream,
    duration: float,
) -> List[CbrFlow]:
    """Explicit pairs from the config, otherwise distinct random pairs from ``rng``."""
    if node_count < 2:
        raise InsufficientNodesError(node_count)

    stop = duration if config.stop is None else min(config.stop, duration)
    start = min(config.start, stop)

    if config.pairs:
        pairs = [(int(p[0]), int(p[1])) for p in config.pairs]
    else:
        wanted = config.flows
        if wanted is None:
            wanted = default_flow_count(node_count)
        capacity = node_count * (node_count - 1)
        if wanted > capacity:
            raise ValidationError(
                "traffic.flows",
                wanted,
                f"At most {capacity} distinct flows fit {node_count} nodes",
            )
        pairs = _draw_pairs(node_count, wanted, rng)

    return [
        CbrFlow(i, src, dst, config.payload_bytes, config.rate, start, stop)
        for i, (src, dst) in enumerate(pairs)
    ]


def _draw_pairs(node_count: int, wanted: int, rng: RngStream) -> List[tuple]:
    chosen: List[tuple] = []
    seen = set()
    while len(chosen) < wanted:
        src = rng.integers(0, node_count)
        dst = rng.integers(0, node_count)
        if src == dst or (src, dst) in seen:
            continue
        seen.add((src, dst))
        chosen.append((src, dst))
    return chosen


def flows_table(flows: Sequence[CbrFlow]) -> List[Dict[str, Any]]:
    return [flow.to_dict() for flow in flows]
