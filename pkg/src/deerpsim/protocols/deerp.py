"""
Mode-aware hybrid routing.

Every protocol named in the node's assignment runs side by side and keeps
its own state. The node's current mode picks which component answers a
forwarding question first; the others are fallbacks. DSDV control traffic is
only generated while the current mode is assigned to DSDV.
"""

from typing import Callable, Dict, List, Optional, Type

from ..core.models import ControlMessage, DataPacket, DropCause, Frame
from ..utils.logging_config import get_logger
from .aodv import AodvAgent
from .base import NodeServices, ReactiveAgent, RoutingAgent, RoutingParams
from .dsdv import DsdvAgent
from .dsr import DsrAgent
from .selection import ModeClassifier, ProtocolAssignment

logger = get_logger(__name__)

COMPONENTS: Dict[str, Type[RoutingAgent]] = {
    "DSDV": DsdvAgent,
    "DSR": DsrAgent,
    "AODV": AodvAgent,
}


class DeerpAgent(RoutingAgent):
    """Hybrid agent composing the protocols of a ``ProtocolAssignment``."""

    name = "DEERP"

    def __init__(
        self,
        node: NodeServices,
        params: RoutingParams,
        assignment: ProtocolAssignment,
        classifier: ModeClassifier,
    ):
        super().__init__(node, params)
        self.assignment = assignment
        self.classifier = classifier
        self.components: Dict[str, RoutingAgent] = {}
        for proto in assignment.protocols():
            gate: Optional[Callable[[], bool]] = None
            if proto == "DSDV":
                gate = self._dsdv_gate
            agent = COMPONENTS[proto](node, params, control_gate=gate)
            agent.redispatch = self._dispatch
            self.components[proto] = agent

        # Misses are resolved by DSR discovery, else AODV, else dropped
        self.discoverer: Optional[ReactiveAgent] = None
        for proto in ("DSR", "AODV"):
            if proto in self.components:
                self.discoverer = self.components[proto]  # type: ignore[assignment]
                break

    def _dsdv_gate(self) -> bool:
        return self.current_protocol() == "DSDV"

    def current_protocol(self) -> str:
        return self.assignment.for_mode(self.classifier.mode_at(self.now))

    def _order(self) -> List[RoutingAgent]:
        primary = self.current_protocol()
        others = [c for p, c in self.components.items() if p != primary]
        return [self.components[primary]] + others

    def start(self) -> None:
        for component in self.components.values():
            component.start()

    def has_route(self, dst: int) -> bool:
        return any(c.has_route(dst) for c in self.components.values())

    def next_hop_for(self, dst: int) -> Optional[int]:
        for component in self._order():
            hop = component.next_hop_for(dst)
            if hop is not None:
                return hop
        return None

    def answering_component(self, dst: int) -> Optional[RoutingAgent]:
        for component in self._order():
            if component.has_route(dst):
                return component
        return None

    def send_data(self, packet: DataPacket) -> None:
        self.answering_component(packet.dst).send_data(packet)

    def originate(self, packet: DataPacket) -> None:
        self._dispatch(packet)

    def _dispatch(self, packet: DataPacket) -> None:
        component = self.answering_component(packet.dst)
        if component is not None:
            component.send_data(packet)
        elif self.discoverer is not None:
            self.discoverer.on_route_miss(packet)
        else:
            self.node.drop(packet, DropCause.NO_ROUTE)

    def receive_data(self, packet: DataPacket, sender: int) -> None:
        if packet.source_route is not None and "DSR" in self.components:
            # Source-routed packets stay on their route
            self.components["DSR"].receive_data(packet, sender)
            return
        aodv = self.components.get("AODV")
        if isinstance(aodv, AodvAgent):
            aodv.note_precursor(packet, sender)
        if packet.dst == self.node_id:
            self.node.deliver(packet)
            return
        self.forward(packet)

    def forward(self, packet: DataPacket) -> None:
        component = self.answering_component(packet.dst)
        if component is None:
            self.node.drop(packet, DropCause.NO_ROUTE)
        else:
            component.send_data(packet)

    def handle_control(self, msg: ControlMessage, sender: int) -> None:
        component = self.components.get(msg.protocol)
        if component is not None:
            component.handle_control(msg, sender)

    def handle_link_break(self, next_hop: int, frame: Frame) -> None:
        payload = frame.payload
        owner = payload.via if isinstance(payload, DataPacket) else payload.protocol
        component = self.components.get(owner)
        if component is None:
            component = self._order()[0]
        component.handle_link_break(next_hop, frame)

    def buffered_uids(self) -> List[int]:
        return [uid for c in self.components.values() for uid in c.buffered_uids()]
