"""
Dynamic Source Routing.

Routes are discovered on demand by flooding route requests that record the
path they take. Only the destination answers, and only the first copy it
hears. Data packets carry the whole route. There is no promiscuous listening
and no salvaging.
"""

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..core.models import ControlMessage, DataPacket, DropCause, Frame
from ..utils.logging_config import get_logger
from .base import ReactiveAgent

logger = get_logger(__name__)

Route = Tuple[int, ...]


@dataclass
class DsrRreq(ControlMessage):
    initiator: int
    target: int
    request_id: int
    record: Route
    protocol: str = "DSR"
    msg_type: str = "RREQ"

    @property
    def size_bytes(self) -> int:
        return 64 + 4 * len(self.record)


@dataclass
class DsrRrep(ControlMessage):
    route: Route
    index: int  # position of the node holding this copy
    protocol: str = "DSR"
    msg_type: str = "RREP"

    @property
    def size_bytes(self) -> int:
        return 64 + 4 * len(self.route)


@dataclass
class DsrRerr(ControlMessage):
    reporter: int
    unreachable: int
    path: Route  # from the reporter back to the route's source
    index: int
    protocol: str = "DSR"
    msg_type: str = "RERR"

    @property
    def size_bytes(self) -> int:
        return 24


@dataclass
class DsrCacheEntry:
    dest: int
    source_route: Route
    learned_at: float


def has_link(route: Sequence[int], a: int, b: int) -> bool:
    return any((x, y) in ((a, b), (b, a)) for x, y in zip(route, route[1:]))


class RouteCache:
    """Up to ``capacity`` source routes per destination, freshest first."""

    def __init__(self, owner: int, capacity: int = 4):
        self.owner = owner
        self.capacity = capacity
        self._routes: Dict[int, List[DsrCacheEntry]] = {}

    def add(self, route: Sequence[int], now: float) -> List[int]:
        """Cache ``route`` and each of its prefixes; returns destinations covered."""
        route = tuple(route)
        if len(route) < 2 or route[0] != self.owner or len(set(route)) != len(route):
            return []
        covered = []
        for k in range(1, len(route)):
            prefix = route[: k + 1]
            entries = [
                e for e in self._routes.get(prefix[-1], []) if e.source_route != prefix
            ]
            entries.insert(0, DsrCacheEntry(prefix[-1], prefix, now))
            self._routes[prefix[-1]] = entries[: self.capacity]
            covered.append(prefix[-1])
        return covered

    def route_for(self, dest: int) -> Optional[Route]:
        entries = self._routes.get(dest)
        return entries[0].source_route if entries else None

    def entries(self, dest: int) -> List[DsrCacheEntry]:
        return list(self._routes.get(dest, []))

    def remove_link(self, a: int, b: int) -> List[int]:
        """Drop every route using link a-b; returns destinations affected."""
        affected = []
        for dest in list(self._routes):
            kept = [e for e in self._routes[dest] if not has_link(e.source_route, a, b)]
            if len(kept) != len(self._routes[dest]):
                affected.append(dest)
            if kept:
                self._routes[dest] = kept
            else:
                del self._routes[dest]
        return affected


class DsrAgent(ReactiveAgent):
    """On-demand source-routing agent."""

    name = "DSR"

    def __init__(self, node, params, control_gate=None):
        super().__init__(node, params, control_gate)
        self.cache = RouteCache(self.node_id, params.dsr_cache_size)
        self.request_id = 0
        self._seen: Set[Tuple[int, int]] = set()

    def has_route(self, dst: int) -> bool:
        return dst != self.node_id and self.cache.route_for(dst) is not None

    def next_hop_for(self, dst: int) -> Optional[int]:
        if dst == self.node_id:
            return None
        route = self.cache.route_for(dst)
        return None if route is None else route[1]

    def send_data(self, packet: DataPacket) -> None:
        route = self.cache.route_for(packet.dst)
        packet.source_route = list(route)
        packet.route_index = 0
        packet.via = self.name
        self.node.send(route[1], packet)

    def receive_data(self, packet: DataPacket, sender: int) -> None:
        route = packet.source_route
        if route is not None:
            nxt = packet.route_index + 1
            if nxt < len(route) and route[nxt] == self.node_id:
                packet.route_index = nxt
            elif self.node_id in route:
                packet.route_index = route.index(self.node_id)
        super().receive_data(packet, sender)

    def forward(self, packet: DataPacket) -> None:
        route = packet.source_route
        if route is None:
            super().forward(packet)
            return
        packet.via = self.name
        self.node.send(route[packet.route_index + 1], packet)

    def send_route_request(self, dst: int) -> None:
        self.request_id += 1
        self._seen.add((self.node_id, self.request_id))
        request = DsrRreq(self.node_id, dst, self.request_id, (self.node_id,))
        self.node.send_broadcast(request)

    def handle_control(self, msg: ControlMessage, sender: int) -> None:
        if isinstance(msg, DsrRreq):
            self._on_request(msg)
        elif isinstance(msg, DsrRrep):
            self._on_reply(msg)
        elif isinstance(msg, DsrRerr):
            self._on_error(msg)

    def _on_request(self, msg: DsrRreq) -> None:
        key = (msg.initiator, msg.request_id)
        if (
            msg.initiator == self.node_id
            or key in self._seen
            or self.node_id in msg.record
        ):
            return
        self._seen.add(key)
        record = msg.record + (self.node_id,)

        if msg.target != self.node_id:
            forward = DsrRreq(msg.initiator, msg.target, msg.request_id, record)
            self.node.send_broadcast(forward)
            return

        # First copy to arrive travelled the fewest hops
        self._learn(tuple(reversed(record)))
        self.count("route_replies")
        self.node.send(record[-2], DsrRrep(record, len(record) - 2))

    def _on_reply(self, msg: DsrRrep) -> None:
        if msg.route[msg.index] != self.node_id:
            return
        if msg.index == 0:
            logger.debug(
                f"t={self.now:.6f} node {self.node_id} DSR learned {list(msg.route)}"
            )
            self._learn(msg.route)
            return
        self.node.send(msg.route[msg.index - 1], replace(msg, index=msg.index - 1))

    def _on_error(self, msg: DsrRerr) -> None:
        if msg.path[msg.index] != self.node_id:
            return
        self.cache.remove_link(msg.reporter, msg.unreachable)
        if msg.index + 1 < len(msg.path):
            self.node.send(msg.path[msg.index + 1], replace(msg, index=msg.index + 1))

    def _learn(self, route: Route) -> None:
        for dest in self.cache.add(route, self.now):
            if dest in self.discoveries or self.buffer.waiting_for(dest):
                self.route_found(dest)

    def handle_link_break(self, next_hop: int, frame: Frame) -> None:
        if self.cache.remove_link(self.node_id, next_hop):
            self.count("route_breaks")

        packet = frame.payload
        if not isinstance(packet, DataPacket):
            self.count("control_lost", type=packet.msg_type)
            return
        if packet.src == self.node_id:
            self.redispatch(packet)
            return

        self.node.drop(packet, DropCause.LINK_BREAK)
        route = packet.source_route or []
        if route and route[0] != self.node_id:
            back = tuple(reversed(route[: packet.route_index + 1]))
            self.count("route_errors")
            self.node.send(back[1], DsrRerr(self.node_id, next_hop, back, 1))
