"""
Core data structures shared by the radio, routing and traffic layers.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

BROADCAST = -1


class DropCause(str, Enum):
    """Why a data packet never reached its destination."""

    QUEUE = "queue"
    NO_ROUTE = "no-route"
    ENERGY = "energy"
    LINK_BREAK = "link-break"
    BUFFER_OVERFLOW = "buffer-overflow"
    IN_FLIGHT_AT_END = "in-flight-at-end"


@dataclass(frozen=True)
class Position:
    """A point on the terrain, in meters."""

    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass
class DataPacket:
    """An application packet produced by a CBR flow."""

    uid: int
    flow_id: int
    seq: int
    src: int
    dst: int
    payload_bytes: int
    created_at: float
    path: List[int] = field(default_factory=list)
    source_route: Optional[List[int]] = None
    route_index: int = 0
    via: Optional[str] = None  # protocol that last forwarded it

    @property
    def hops(self) -> int:
        return max(0, len(self.path) - 1)

    @property
    def header_bytes(self) -> int:
        if self.source_route is None:
            return 0
        return 4 + 4 * len(self.source_route)


class ControlMessage:
    """Base for routing control messages; subclasses define the wire size."""

    protocol: str = ""
    msg_type: str = ""

    @property
    def size_bytes(self) -> int:
        raise NotImplementedError


@dataclass
class Frame:
    """A link-layer frame carrying a data packet or a control message."""

    src: int
    dst: int
    size_bits: int
    payload: Any
    enqueued_at: float = 0.0
    tx_start: float = -1.0
    rx_end: float = -1.0

    @property
    def is_broadcast(self) -> bool:
        return self.dst == BROADCAST

    @property
    def is_control(self) -> bool:
        return not isinstance(self.payload, DataPacket)

    def describe(self) -> str:
        if isinstance(self.payload, DataPacket):
            return f"data:{self.payload.uid}:{self.src}->{self.dst}"
        return f"{self.payload.protocol}-{self.payload.msg_type}:{self.src}->{self.dst}"


@dataclass
class PacketRecord:
    """Lifecycle of one data packet."""

    uid: int
    flow_id: int
    src: int
    dst: int
    payload_bytes: int
    created_at: float
    delivered_at: Optional[float] = None
    hops: Optional[int] = None
    path: Optional[Tuple[int, ...]] = None
    fate: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class PacketLedger:
    """
    Tracks every data packet from origination to a single final fate.

    Packets without a fate when the run ends are split into those waiting in
    a routing buffer and those still queued or on the air.
    """

    def __init__(self) -> None:
        self.records: Dict[int, PacketRecord] = {}
        self._next_uid = 0

    def originate(
        self,
        flow_id: int,
        seq: int,
        src: int,
        dst: int,
        payload_bytes: int,
        now: float,
    ) -> DataPacket:
        uid = self._next_uid
        self._next_uid += 1
        self.records[uid] = PacketRecord(uid, flow_id, src, dst, payload_bytes, now)
        return DataPacket(uid, flow_id, seq, src, dst, payload_bytes, now, path=[src])

    def deliver(self, packet: DataPacket, now: float) -> bool:
        record = self.records[packet.uid]
        if record.fate is not None:
            return False
        record.fate = "delivered"
        record.delivered_at = now
        record.hops = packet.hops
        record.path = tuple(packet.path)
        return True

    def drop(self, packet: DataPacket, cause: DropCause) -> bool:
        record = self.records[packet.uid]
        if record.fate is not None:
            return False
        record.fate = DropCause(cause).value
        record.path = tuple(packet.path)
        return True

    def close(self, buffered_uids: Iterable[int]) -> None:
        """Assign end-of-run fates to packets still outstanding."""
        buffered = set(buffered_uids)
        for record in self.records.values():
            if record.fate is None:
                if record.uid in buffered:
                    record.fate = "buffered"
                else:
                    record.fate = DropCause.IN_FLIGHT_AT_END.value

    @property
    def originated(self) -> int:
        return len(self.records)

    def delivered(self) -> List[PacketRecord]:
        return [r for r in self.records.values() if r.fate == "delivered"]

    def count(self, fate: str) -> int:
        return sum(1 for r in self.records.values() if r.fate == fate)
