"""
Destination-Sequenced Distance Vector routing.

Every node periodically broadcasts its whole table with its own sequence
number bumped by two. Even sequence numbers mark reachable destinations, odd
ones mark broken routes advertised with an infinite metric. Any entry a
node installs from a neighbor is re-advertised immediately in a triggered
incremental update, so each new sequence number floods the network and
settles on shortest paths.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from ..core.models import ControlMessage, DataPacket, DropCause, Frame
from ..utils.logging_config import get_logger
from .base import RoutingAgent

logger = get_logger(__name__)

INFINITY = math.inf

PERIODIC = "PERIODIC"
TRIGGERED = "TRIGGERED"


@dataclass
class DsdvEntry:
    dest: int
    next_hop: int
    metric: float
    seq: int
    installed_at: float

    @property
    def valid(self) -> bool:
        return self.seq % 2 == 0 and not math.isinf(self.metric)


@dataclass
class DsdvUpdate(ControlMessage):
    origin: int
    entries: Tuple[Tuple[int, float, int], ...]
    msg_type: str = PERIODIC
    protocol: str = "DSDV"

    @property
    def size_bytes(self) -> int:
        return 20 + 12 * len(self.entries)


class DsdvAgent(RoutingAgent):
    """Proactive distance-vector agent."""

    name = "DSDV"

    def __init__(self, node, params, control_gate=None):
        super().__init__(node, params, control_gate)
        self.own_seq = 0
        self.table: Dict[int, DsdvEntry] = {
            self.node_id: DsdvEntry(self.node_id, self.node_id, 0, 0, 0.0),
        }

    def start(self) -> None:
        jitter = self.node.jitter.uniform(0.0, self.params.dsdv_jitter)
        first = self.params.dsdv_update_interval + jitter
        self.node.engine.call_at(
            first, "dsdv_update", self.periodic_tick, node=self.node_id
        )

    def periodic_tick(self) -> None:
        self.node.engine.call_later(
            self.params.dsdv_update_interval,
            "dsdv_update",
            self.periodic_tick,
            node=self.node_id,
        )
        if not self.node.alive():
            return
        if not self.control_enabled():
            self.count("updates_suppressed", type=PERIODIC)
            return

        self.own_seq += 2
        me = self.table[self.node_id]
        me.seq = self.own_seq
        me.installed_at = self.now
        self._broadcast(self.table.values(), PERIODIC)

    def _broadcast(self, entries: Iterable[DsdvEntry], kind: str) -> None:
        ordered = sorted(entries, key=lambda e: e.dest)
        advert = tuple((e.dest, e.metric, e.seq) for e in ordered)
        self.node.send_broadcast(DsdvUpdate(self.node_id, advert, kind))

    def _triggered_update(self, dests: List[int]) -> None:
        if not dests or not self.node.alive():
            return
        if not self.control_enabled():
            self.count("updates_suppressed", type=TRIGGERED)
            return
        self._broadcast((self.table[d] for d in dests), TRIGGERED)

    def route_to(self, dst: int) -> Optional[DsdvEntry]:
        entry = self.table.get(dst)
        if entry is None or not entry.valid:
            return None
        return entry

    def has_route(self, dst: int) -> bool:
        return self.next_hop_for(dst) is not None

    def next_hop_for(self, dst: int) -> Optional[int]:
        if dst == self.node_id:
            return None
        entry = self.route_to(dst)
        return None if entry is None else entry.next_hop

    def send_data(self, packet: DataPacket) -> None:
        packet.via = self.name
        packet.source_route = None
        self.node.send(self.next_hop_for(packet.dst), packet)

    def handle_control(self, msg: ControlMessage, sender: int) -> None:
        if not isinstance(msg, DsdvUpdate):
            return
        changed = []
        invalidated = []
        for dest, metric, seq in msg.entries:
            if dest == self.node_id:
                continue
            new_metric = metric + 1
            current = self.table.get(dest)
            if current is None:
                if math.isinf(new_metric):
                    continue
            elif seq < current.seq:
                continue
            elif seq == current.seq and new_metric >= current.metric:
                continue

            was_valid = current is not None and current.valid
            entry = DsdvEntry(dest, sender, new_metric, seq, self.now)
            self.table[dest] = entry
            changed.append(dest)
            if was_valid and not entry.valid:
                invalidated.append(dest)

        if invalidated:
            logger.debug(
                f"t={self.now:.6f} node {self.node_id} DSDV learned broken routes "
                f"to {invalidated}"
            )
        # Installed changes go out at once as an incremental update
        self._triggered_update(changed)

    def handle_link_break(self, next_hop: int, frame: Frame) -> None:
        broken = []
        for entry in self.table.values():
            if entry.dest == self.node_id or not entry.valid:
                continue
            if entry.next_hop == next_hop:
                entry.seq += 1
                entry.metric = INFINITY
                entry.installed_at = self.now
                broken.append(entry.dest)
        if broken:
            self.count("route_breaks")
            self._triggered_update(sorted(broken))

        packet = frame.payload
        if isinstance(packet, DataPacket):
            if packet.src == self.node_id:
                self.redispatch(packet)
            else:
                self.node.drop(packet, DropCause.LINK_BREAK)
