"""
Protocol selection: node modes, the RPSC criteria table and the SRP lookup.

A row of the table maps a scenario (mobility model, node-count range, speed
range) to one protocol per node mode. ``srp_select`` finds the row covering a
scenario; ``ModeClassifier`` tells which mode a node is in at a given time.
"""

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..utils.error_handling import (
    ConfigurationError,
    FileProcessingError,
    NoMatchingRowError,
)
from ..utils.logging_config import get_logger

logger = get_logger(__name__)

ROUTING_PROTOCOLS = ("DSR", "DSDV", "AODV")
TABLE_COLUMNS = [
    "mobility",
    "nodes_min",
    "nodes_max",
    "speed_min",
    "speed_max",
    "idle",
    "tx",
    "rx",
]


class Mode(str, Enum):
    IDLE = "Idle"
    TX = "Tx"
    RX = "Rx"
    SLEEP = "Sleep"


@dataclass
class DeerpParams:
    rpsc_table: Optional[str] = None
    mode_window: float = 1.0
    nearest_fallback: bool = False


@dataclass(frozen=True)
class ProtocolAssignment:
    idle_protocol: str
    tx_protocol: str
    rx_protocol: str

    def __post_init__(self) -> None:
        for proto in (self.idle_protocol, self.tx_protocol, self.rx_protocol):
            if proto not in ROUTING_PROTOCOLS:
                raise ConfigurationError(
                    "rpsc", proto, f"Unsupported protocol in assignment: {proto}"
                )

    def for_mode(self, mode: Mode) -> str:
        if mode is Mode.TX:
            return self.tx_protocol
        if mode is Mode.RX:
            return self.rx_protocol
        # A sleeping node falls back to the idle choice
        return self.idle_protocol

    def protocols(self) -> List[str]:
        """Distinct protocols in Idle, Tx, Rx order."""
        seen: List[str] = []
        for proto in (self.idle_protocol, self.tx_protocol, self.rx_protocol):
            if proto not in seen:
                seen.append(proto)
        return seen

    def to_dict(self) -> Dict[str, str]:
        return {
            "Idle": self.idle_protocol,
            "Tx": self.tx_protocol,
            "Rx": self.rx_protocol,
        }


@dataclass(frozen=True)
class RpscRow:
    mobility: str
    nodes_min: int
    nodes_max: int
    speed_min: float
    speed_max: float
    assignment: ProtocolAssignment

    def __post_init__(self) -> None:
        if self.nodes_min > self.nodes_max or self.speed_min > self.speed_max:
            raise ConfigurationError("rpsc", str(self), "RPSC row has an empty range")

    def matches(self, mobility: str, node_count: int, speed_max: float) -> bool:
        return (
            self.mobility == mobility
            and self.nodes_min <= node_count <= self.nodes_max
            and self.speed_min <= speed_max <= self.speed_max
        )

    def distance(self, node_count: int, speed_max: float) -> float:
        """Normalized distance from a scenario to this row's ranges."""

        def gap(value: float, low: float, high: float) -> float:
            span = high - low if high > low else 1.0
            return max(0.0, low - value, value - high) / span

        return math.hypot(
            gap(node_count, self.nodes_min, self.nodes_max),
            gap(speed_max, self.speed_min, self.speed_max),
        )

    def overlaps(self, other: "RpscRow") -> bool:
        return (
            self.mobility == other.mobility
            and self.nodes_min <= other.nodes_max
            and other.nodes_min <= self.nodes_max
            and self.speed_min <= other.speed_max
            and other.speed_min <= self.speed_max
        )


@dataclass(frozen=True)
class RpscTable:
    rows: Tuple[RpscRow, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            for other in self.rows[i + 1 :]:
                if row.overlaps(other):
                    raise ConfigurationError(
                        "rpsc", None, f"RPSC rows overlap: {row} and {other}"
                    )

    @classmethod
    def default(cls) -> "RpscTable":
        rwp = ProtocolAssignment("DSR", "DSDV", "DSR")
        rpgm = ProtocolAssignment("DSDV", "DSDV", "DSR")
        return cls(
            (
                RpscRow("RWP", 5, 25, 1.0, 10.0, rwp),
                RpscRow("RPGM", 20, 80, 0.5, 5.0, rpgm),
            )
        )

    @classmethod
    def uniform(
        cls, protocol: str, mobility: Iterable[str] = ("RWP", "RPGM", "STATIC")
    ) -> "RpscTable":
        """A table assigning ``protocol`` to every mode for any scenario."""
        assignment = ProtocolAssignment(protocol, protocol, protocol)
        return cls(
            tuple(RpscRow(m, 0, 10**9, 0.0, math.inf, assignment) for m in mobility)
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RpscTable":
        """
        Read a plain-text table, one row per line:
        ``mobility nodes_min nodes_max speed_min speed_max idle tx rx``.
        Fields are separated by commas or whitespace; ``#`` starts a comment.
        """
        path = Path(path)
        if not path.is_file():
            raise FileProcessingError(str(path), "read", FileNotFoundError(str(path)))
        try:
            df = pd.read_csv(
                path,
                comment="#",
                header=None,
                names=TABLE_COLUMNS,
                sep=r"[,\s]+",
                engine="python",
            )
        except (ValueError, pd.errors.ParserError) as e:
            raise ConfigurationError(
                str(path), message=f"Cannot parse RPSC table {path}: {e}"
            ) from e

        df = df.dropna(how="all")
        if df.isna().any().any():
            raise ConfigurationError(
                str(path), message=f"RPSC table {path} has rows with missing fields"
            )

        rows = []
        for rec in df.to_dict("records"):
            modes = (str(rec[k]).upper() for k in ("idle", "tx", "rx"))
            rows.append(
                RpscRow(
                    str(rec["mobility"]).upper(),
                    int(rec["nodes_min"]),
                    int(rec["nodes_max"]),
                    float(rec["speed_min"]),
                    float(rec["speed_max"]),
                    ProtocolAssignment(*modes),
                )
            )
        logger.debug(f"Loaded {len(rows)} RPSC rows from {path}")
        return cls(tuple(rows))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                [r.mobility, r.nodes_min, r.nodes_max, r.speed_min, r.speed_max]
                + [
                    r.assignment.idle_protocol,
                    r.assignment.tx_protocol,
                    r.assignment.rx_protocol,
                ]
                for r in self.rows
            ],
            columns=TABLE_COLUMNS,
        )


def srp_select(
    table: RpscTable,
    mobility: str,
    node_count: int,
    speed_max: float,
    nearest_fallback: bool = False,
) -> ProtocolAssignment:
    """Assignment of the row covering the scenario, matched on its maximum speed."""
    for row in table.rows:
        if row.matches(mobility, node_count, speed_max):
            return row.assignment

    if nearest_fallback:
        candidates = [r for r in table.rows if r.mobility == mobility]
        if candidates:
            best = min(candidates, key=lambda r: r.distance(node_count, speed_max))
            logger.info(
                f"No RPSC row covers {mobility}/{node_count} nodes/{speed_max} m/s; "
                f"using nearest row {best}"
            )
            return best.assignment

    raise NoMatchingRowError(mobility, node_count, speed_max)


class _Spans:
    """Sorted, merged ``[start, end)`` spans."""

    def __init__(self, spans: Iterable[Tuple[float, float]] = ()):
        self.starts: List[float] = []
        self.ends: List[float] = []
        for start, end in sorted(spans):
            self.add(start, end)

    def add(self, start: float, end: float) -> None:
        if self.ends and start <= self.ends[-1]:
            self.ends[-1] = max(self.ends[-1], end)
        else:
            self.starts.append(start)
            self.ends.append(end)

    def covers(self, t: float) -> bool:
        i = bisect.bisect_right(self.starts, t) - 1
        return i >= 0 and t < self.ends[i]

    def __iter__(self):
        return iter(zip(self.starts, self.ends))


class ModeClassifier:
    """
    Per-node activity timeline.

    A transmission or origination at ``t`` puts the node in Tx over
    ``[t, t + window)``; receiving a frame addressed to it puts it in Rx over
    the same span. Precedence is Tx > Rx > Sleep > Idle. Activity must be
    recorded in non-decreasing time order.
    """

    def __init__(
        self, window: float = 1.0, sleep: Sequence[Tuple[float, float]] = ()
    ):
        self.window = window
        self._tx = _Spans()
        self._rx = _Spans()
        self._sleep = _Spans(sleep)

    def record_tx(self, t: float) -> None:
        self._tx.add(t, t + self.window)

    def record_rx(self, t: float) -> None:
        self._rx.add(t, t + self.window)

    def mode_at(self, t: float) -> Mode:
        if self._tx.covers(t):
            return Mode.TX
        if self._rx.covers(t):
            return Mode.RX
        if self._sleep.covers(t):
            return Mode.SLEEP
        return Mode.IDLE

    def timeline(self, duration: float) -> List[Tuple[float, float, Mode]]:
        """Partition of ``[0, duration)`` into maximal constant-mode segments."""
        points = {0.0, duration}
        for spans in (self._tx, self._rx, self._sleep):
            for start, end in spans:
                for p in (start, end):
                    if 0.0 < p < duration:
                        points.add(p)
        cuts = sorted(points)

        segments: List[Tuple[float, float, Mode]] = []
        for a, b in zip(cuts, cuts[1:]):
            mode = self.mode_at(a)
            if segments and segments[-1][2] is mode:
                segments[-1] = (segments[-1][0], b, mode)
            else:
                segments.append((a, b, mode))
        return segments
