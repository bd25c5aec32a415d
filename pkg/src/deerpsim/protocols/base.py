"""
Base classes for routing agents.

One agent runs per node. Agents talk to the rest of the simulator only
through ``NodeServices``: sending frames, delivering or dropping data
packets, scheduling timers and counting events.
"""

from abc import ABC, abstractmethod
from collections import OrderedDict, deque
from dataclasses import dataclass
from typing import Callable, Deque, Dict, List, Optional, Protocol, Union

from ..core.engine import Engine, EventHandle
from ..core.models import ControlMessage, DataPacket, DropCause, Frame
from ..core.rng import RngStream
from ..utils.logging_config import get_logger
from ..utils.metrics import MetricsCollector

logger = get_logger(__name__)


@dataclass
class RoutingParams:
    dsdv_update_interval: float = 15.0
    dsdv_jitter: float = 1.0
    discovery_timeout: float = 3.0
    discovery_retries: int = 1
    buffer_capacity: int = 64
    dsr_cache_size: int = 4
    aodv_active_route_timeout: float = 10.0


class NodeServices(Protocol):
    """What a node offers its routing agent."""

    node_id: int
    engine: Engine
    jitter: RngStream
    metrics: MetricsCollector

    def send(
        self, next_hop: int, payload: Union[DataPacket, ControlMessage]
    ) -> bool: ...

    def send_broadcast(self, msg: ControlMessage) -> bool: ...

    def deliver(self, packet: DataPacket) -> None: ...

    def drop(self, packet: DataPacket, cause: DropCause) -> None: ...

    def alive(self) -> bool: ...


class SendBuffer:
    """Per-destination FIFO of packets waiting for a route."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._queues: Dict[int, Deque[DataPacket]] = OrderedDict()

    def add(self, packet: DataPacket) -> bool:
        queue = self._queues.setdefault(packet.dst, deque())
        if len(queue) >= self.capacity:
            return False
        queue.append(packet)
        return True

    def pop_all(self, dst: int) -> List[DataPacket]:
        return list(self._queues.pop(dst, ()))

    def waiting_for(self, dst: int) -> int:
        return len(self._queues.get(dst, ()))

    def uids(self) -> List[int]:
        return [p.uid for queue in self._queues.values() for p in queue]

    def __len__(self) -> int:
        return sum(len(queue) for queue in self._queues.values())


class RoutingAgent(ABC):
    """Per-node routing state machine."""

    name = ""

    def __init__(
        self,
        node: NodeServices,
        params: RoutingParams,
        control_gate: Optional[Callable[[], bool]] = None,
    ):
        self.node = node
        self.params = params
        self.control_gate = control_gate
        # Where a source sends a packet whose route just broke
        self.redispatch: Callable[[DataPacket], None] = self.originate

    @property
    def node_id(self) -> int:
        return self.node.node_id

    @property
    def now(self) -> float:
        return self.node.engine.now

    def control_enabled(self) -> bool:
        return self.control_gate is None or self.control_gate()

    def start(self) -> None:
        """Arm timers at time zero."""

    def periodic_tick(self) -> None:
        """Periodic control work, if the protocol has any."""

    @abstractmethod
    def has_route(self, dst: int) -> bool: ...

    @abstractmethod
    def next_hop_for(self, dst: int) -> Optional[int]:
        """Next hop towards ``dst``, or None when there is no usable route."""

    @abstractmethod
    def send_data(self, packet: DataPacket) -> None:
        """Forward ``packet`` using this agent's own routing state."""

    @abstractmethod
    def handle_control(self, msg: ControlMessage, sender: int) -> None: ...

    @abstractmethod
    def handle_link_break(self, next_hop: int, frame: Frame) -> None: ...

    def originate(self, packet: DataPacket) -> None:
        if self.has_route(packet.dst):
            self.send_data(packet)
        else:
            self.on_route_miss(packet)

    def on_route_miss(self, packet: DataPacket) -> None:
        self.node.drop(packet, DropCause.NO_ROUTE)

    def receive_data(self, packet: DataPacket, sender: int) -> None:
        if packet.dst == self.node_id:
            self.node.deliver(packet)
        else:
            self.forward(packet)

    def forward(self, packet: DataPacket) -> None:
        if self.has_route(packet.dst):
            self.send_data(packet)
        else:
            self.node.drop(packet, DropCause.NO_ROUTE)

    def buffered_uids(self) -> List[int]:
        return []

    def count(self, name: str, **tags: str) -> None:
        self.node.metrics.increment_counter(name, tags={"protocol": self.name, **tags})


@dataclass
class Discovery:
    dst: int
    attempts: int
    timer: Optional[EventHandle] = None


class ReactiveAgent(RoutingAgent):
    """Shared buffering and retry logic for on-demand protocols."""

    def __init__(
        self,
        node: NodeServices,
        params: RoutingParams,
        control_gate: Optional[Callable[[], bool]] = None,
    ):
        super().__init__(node, params, control_gate)
        self.buffer = SendBuffer(params.buffer_capacity)
        self.discoveries: Dict[int, Discovery] = {}

    @abstractmethod
    def send_route_request(self, dst: int) -> None: ...

    def on_route_miss(self, packet: DataPacket) -> None:
        if not self.buffer.add(packet):
            self.node.drop(packet, DropCause.BUFFER_OVERFLOW)
            return
        if packet.dst not in self.discoveries:
            self.begin_discovery(packet.dst)

    def begin_discovery(self, dst: int) -> None:
        self.count("discoveries")
        logger.debug(
            f"t={self.now:.6f} node {self.node_id} {self.name} discovery for {dst}"
        )
        discovery = Discovery(dst=dst, attempts=1)
        self.discoveries[dst] = discovery
        self.send_route_request(dst)
        self._arm(discovery)

    def _arm(self, discovery: Discovery) -> None:
        discovery.timer = self.node.engine.call_later(
            self.params.discovery_timeout,
            "discovery_timeout",
            lambda: self._timeout(discovery.dst),
            node=self.node_id,
            detail=f"{self.name}:{discovery.dst}",
        )

    def _timeout(self, dst: int) -> None:
        discovery = self.discoveries.get(dst)
        if discovery is None:
            return
        if discovery.attempts <= self.params.discovery_retries:
            discovery.attempts += 1
            self.send_route_request(dst)
            self._arm(discovery)
            return

        del self.discoveries[dst]
        self.count("discovery_failures")
        logger.debug(
            f"t={self.now:.6f} node {self.node_id} {self.name} gave up on {dst}"
        )
        for packet in self.buffer.pop_all(dst):
            self.node.drop(packet, DropCause.NO_ROUTE)

    def route_found(self, dst: int) -> None:
        """Stop any discovery for ``dst`` and release its buffered packets."""
        discovery = self.discoveries.pop(dst, None)
        if discovery is not None:
            self.node.engine.cancel(discovery.timer)
        for packet in self.buffer.pop_all(dst):
            if self.has_route(dst):
                self.send_data(packet)
            else:
                self.on_route_miss(packet)

    def buffered_uids(self) -> List[int]:
        return self.buffer.uids()
