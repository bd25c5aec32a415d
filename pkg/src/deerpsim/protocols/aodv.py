"""
Ad-hoc On-demand Distance Vector routing.

Routes are hop-by-hop table entries created by flooded route requests and
unicast replies. Entries expire after the active-route timeout unless data
keeps refreshing them. Link breaks come from the MAC; there are no hello
messages.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Set, Tuple

from ..core.models import ControlMessage, DataPacket, DropCause, Frame
from ..utils.logging_config import get_logger
from .base import ReactiveAgent

logger = get_logger(__name__)


@dataclass
class AodvRreq(ControlMessage):
    origin: int
    origin_seq: int
    rreq_id: int
    dest: int
    dest_seq: Optional[int]
    hop_count: int
    protocol: str = "AODV"
    msg_type: str = "RREQ"

    @property
    def size_bytes(self) -> int:
        return 24


@dataclass
class AodvRrep(ControlMessage):
    origin: int
    dest: int
    dest_seq: int
    hop_count: int
    protocol: str = "AODV"
    msg_type: str = "RREP"

    @property
    def size_bytes(self) -> int:
        return 24


@dataclass
class AodvRerr(ControlMessage):
    unreachable: Tuple[Tuple[int, int], ...]
    protocol: str = "AODV"
    msg_type: str = "RERR"

    @property
    def size_bytes(self) -> int:
        return 24


@dataclass
class AodvEntry:
    dest: int
    next_hop: int
    hop_count: int
    dest_seq: int
    lifetime: float
    valid: bool = True
    seq_known: bool = True
    precursors: Set[int] = field(default_factory=set)

    def usable(self, now: float) -> bool:
        return self.valid and self.lifetime > now


class AodvAgent(ReactiveAgent):
    """On-demand distance-vector agent."""

    name = "AODV"

    def __init__(self, node, params, control_gate=None):
        super().__init__(node, params, control_gate)
        self.own_seq = 0
        self.rreq_id = 0
        self.table: Dict[int, AodvEntry] = {}
        self._seen: Set[Tuple[int, int]] = set()

    @property
    def _expiry(self) -> float:
        return self.now + self.params.aodv_active_route_timeout

    def route_to(self, dst: int) -> Optional[AodvEntry]:
        entry = self.table.get(dst)
        if entry is None or not entry.usable(self.now):
            return None
        return entry

    def has_route(self, dst: int) -> bool:
        return self.next_hop_for(dst) is not None

    def next_hop_for(self, dst: int) -> Optional[int]:
        if dst == self.node_id:
            return None
        entry = self.route_to(dst)
        return None if entry is None else entry.next_hop

    def _update(
        self, dest: int, next_hop: int, hops: int, seq: int, seq_known: bool = True
    ) -> bool:
        """Install or replace the route to ``dest`` if the offer is better."""
        current = self.table.get(dest)
        better = (
            current is None
            or not current.usable(self.now)
            or not current.seq_known
            or (seq_known and seq > current.dest_seq)
            or (seq_known and seq == current.dest_seq and hops < current.hop_count)
        )
        if better:
            precursors = current.precursors if current is not None else set()
            if not seq_known and current is not None:
                seq = current.dest_seq
            self.table[dest] = AodvEntry(
                dest, next_hop, hops, seq, self._expiry, True, seq_known, precursors
            )
            return True
        if current.next_hop == next_hop and current.hop_count == hops:
            current.lifetime = self._expiry
        return False

    def _touch_neighbor(self, neighbor: int) -> None:
        current = self.table.get(neighbor)
        if current is None or not current.usable(self.now) or current.hop_count > 1:
            self._update(neighbor, neighbor, 1, 0, seq_known=False)
        else:
            current.lifetime = self._expiry

    def send_data(self, packet: DataPacket) -> None:
        entry = self.route_to(packet.dst)
        entry.lifetime = self._expiry
        hop = self.table.get(entry.next_hop)
        if hop is not None and hop.usable(self.now):
            hop.lifetime = self._expiry
        packet.via = self.name
        packet.source_route = None
        self.node.send(entry.next_hop, packet)

    def note_precursor(self, packet: DataPacket, sender: int) -> None:
        """Remember that ``sender`` routes through us towards ``packet.dst``."""
        if packet.dst != self.node_id:
            entry = self.route_to(packet.dst)
            if entry is not None:
                entry.precursors.add(sender)

    def receive_data(self, packet: DataPacket, sender: int) -> None:
        self.note_precursor(packet, sender)
        super().receive_data(packet, sender)

    def send_route_request(self, dst: int) -> None:
        self.own_seq += 1
        self.rreq_id += 1
        known = self.table.get(dst)
        dest_seq = known.dest_seq if known is not None and known.seq_known else None
        self._seen.add((self.node_id, self.rreq_id))
        self.node.send_broadcast(
            AodvRreq(self.node_id, self.own_seq, self.rreq_id, dst, dest_seq, 0)
        )

    def handle_control(self, msg: ControlMessage, sender: int) -> None:
        if isinstance(msg, AodvRreq):
            self._on_request(msg, sender)
        elif isinstance(msg, AodvRrep):
            self._on_reply(msg, sender)
        elif isinstance(msg, AodvRerr):
            self._on_error(msg, sender)

    def _on_request(self, msg: AodvRreq, sender: int) -> None:
        self._touch_neighbor(sender)
        key = (msg.origin, msg.rreq_id)
        if msg.origin == self.node_id or key in self._seen:
            return
        self._seen.add(key)

        hops = msg.hop_count + 1
        self._update(msg.origin, sender, hops, msg.origin_seq)

        if msg.dest == self.node_id:
            self.own_seq = max(self.own_seq, msg.dest_seq or 0)
            self.count("route_replies")
            self.node.send(sender, AodvRrep(msg.origin, self.node_id, self.own_seq, 0))
            if msg.origin in self.discoveries or self.buffer.waiting_for(msg.origin):
                self.route_found(msg.origin)
            return

        entry = self.route_to(msg.dest)
        if (
            entry is not None
            and msg.dest_seq is not None
            and entry.seq_known
            and entry.dest_seq >= msg.dest_seq
        ):
            # Fresh enough to answer on the destination's behalf
            entry.precursors.add(sender)
            self.table[msg.origin].precursors.add(entry.next_hop)
            self.count("route_replies")
            reply = AodvRrep(msg.origin, msg.dest, entry.dest_seq, entry.hop_count)
            self.node.send(sender, reply)
            return

        self.node.send_broadcast(replace(msg, hop_count=hops))

    def _on_reply(self, msg: AodvRrep, sender: int) -> None:
        self._touch_neighbor(sender)
        hops = msg.hop_count + 1
        self._update(msg.dest, sender, hops, msg.dest_seq)

        if msg.origin == self.node_id:
            logger.debug(
                f"t={self.now:.6f} node {self.node_id} AODV route to {msg.dest} "
                f"via {sender}"
            )
            self.route_found(msg.dest)
            return

        reverse = self.route_to(msg.origin)
        if reverse is None:
            self.count("control_lost", type=msg.msg_type)
            return
        self.table[msg.dest].precursors.add(reverse.next_hop)
        reverse.precursors.add(sender)
        self.node.send(reverse.next_hop, replace(msg, hop_count=hops))

    def _on_error(self, msg: AodvRerr, sender: int) -> None:
        affected = []
        for dest, seq in msg.unreachable:
            entry = self.table.get(dest)
            if entry is not None and entry.valid and entry.next_hop == sender:
                entry.valid = False
                entry.dest_seq = max(entry.dest_seq, seq)
                if entry.precursors:
                    affected.append((dest, entry.dest_seq))
        if affected:
            self.count("route_errors")
            self.node.send_broadcast(AodvRerr(tuple(affected)))

    def handle_link_break(self, next_hop: int, frame: Frame) -> None:
        broken = []
        for entry in self.table.values():
            if entry.valid and entry.next_hop == next_hop:
                entry.valid = False
                entry.dest_seq += 1
                broken.append(entry)
        if broken:
            self.count("route_breaks")
            unreachable = tuple(
                sorted((e.dest, e.dest_seq) for e in broken if e.precursors)
            )
            if unreachable:
                self.count("route_errors")
                self.node.send_broadcast(AodvRerr(unreachable))

        packet = frame.payload
        if not isinstance(packet, DataPacket):
            self.count("control_lost", type=packet.msg_type)
        elif packet.src == self.node_id:
            self.redispatch(packet)
        else:
            self.node.drop(packet, DropCause.LINK_BREAK)
