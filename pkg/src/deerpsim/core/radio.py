"""
Link layer: unit-disk connectivity, per-node transmit serialization and a
drop-tail interface queue.

The medium is idealized. There are no collisions and no carrier sensing; a
frame reaches every alive, awake node within range of the sender at the
moment transmission starts, and is handed over when transmission ends.
"""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional, Protocol, Sequence, Set, Tuple

import numpy as np

from ..utils.logging_config import get_logger
from ..utils.metrics import MetricsCollector
from .energy import EnergyLedger
from .engine import Engine
from .mobility import MobilityManager
from .models import BROADCAST, DropCause, Frame

logger = get_logger(__name__)


@dataclass
class RadioConfig:
    range: float = 250.0
    bitrate: float = 2e6
    queue_capacity: int = 50
    mac_overhead_bytes: int = 58
    control_priority: bool = False


class LinkListener(Protocol):
    """Upper-layer callbacks the medium reports to."""

    def frame_received(self, node: int, frame: Frame) -> None: ...

    def link_broken(self, node: int, next_hop: int, frame: Frame) -> None: ...

    def frame_dropped(self, node: int, frame: Frame, cause: DropCause) -> None: ...

    def transmission_started(self, node: int, frame: Frame) -> None: ...


class Interface:
    """Transmit side of one node's radio."""

    def __init__(self, node: int):
        self.node = node
        self.queue: Deque[Frame] = deque()
        self.current: Optional[Frame] = None
        self.receivers: Tuple[int, ...] = ()

    @property
    def busy(self) -> bool:
        return self.current is not None


class Medium:
    """Shared channel connecting every node's interface."""

    def __init__(
        self,
        engine: Engine,
        mobility: MobilityManager,
        energy: EnergyLedger,
        config: RadioConfig,
        listener: LinkListener,
        metrics: Optional[MetricsCollector] = None,
        sleep_windows: Optional[Dict[int, List[Tuple[float, float]]]] = None,
    ):
        self.engine = engine
        self.mobility = mobility
        self.energy = energy
        self.config = config
        self.listener = listener
        self.metrics = metrics or MetricsCollector()
        self.sleep_windows = sleep_windows or {}
        self.interfaces = [Interface(node) for node in range(mobility.node_count)]

    def frame_bits(self, payload_bytes: int) -> int:
        """On-air size of a payload, MAC overhead included."""
        return (payload_bytes + self.config.mac_overhead_bytes) * 8

    def airtime(self, size_bits: float) -> float:
        return size_bits / self.config.bitrate

    def awake(self, node: int, t: float) -> bool:
        windows = self.sleep_windows.get(node, ())
        return not any(start <= t < end for start, end in windows)

    def neighbors(self, node: int, t: float) -> Set[int]:
        """Nodes within radio range of ``node`` at time ``t``."""
        coords = self.mobility.positions_at(t)
        deltas = coords - coords[node]
        dist = np.hypot(deltas[:, 0], deltas[:, 1])
        in_range = np.flatnonzero(dist <= self.config.range)
        return {int(n) for n in in_range if n != node}

    def enqueue(self, node: int, frame: Frame) -> bool:
        """Offer a frame to ``node``'s interface queue; False means it was dropped."""
        now = self.engine.now
        frame.enqueued_at = now
        self.metrics.increment_counter("frames_enqueued")

        if not self.energy.alive(node, now):
            self._drop(node, frame, DropCause.ENERGY)
            return False

        iface = self.interfaces[node]
        if len(iface.queue) >= self.config.queue_capacity:
            self._drop(node, frame, DropCause.QUEUE)
            return False

        if self.config.control_priority and frame.is_control:
            # Controls go ahead of data, FIFO among themselves
            position = 0
            for queued in iface.queue:
                if not queued.is_control:
                    break
                position += 1
            iface.queue.insert(position, frame)
        else:
            iface.queue.append(frame)

        if not iface.busy:
            self._start_next(node)
        return True

    def wake(self, node: int) -> None:
        """Resume transmitting after a sleep window."""
        if not self.interfaces[node].busy:
            self._start_next(node)

    def _drop(self, node: int, frame: Frame, cause: DropCause) -> None:
        self.metrics.increment_counter("frames_dropped", tags={"cause": cause.value})
        self.listener.frame_dropped(node, frame, cause)

    def _start_next(self, node: int) -> None:
        iface = self.interfaces[node]
        now = self.engine.now
        if iface.busy or not iface.queue or not self.awake(node, now):
            return

        if not self.energy.alive(node, now):
            while iface.queue:
                self._drop(node, iface.queue.popleft(), DropCause.ENERGY)
            return

        frame = iface.queue.popleft()
        frame.tx_start = now
        end = self.energy[node].charge_tx(frame.size_bits, now)
        frame.rx_end = end

        receivers = tuple(
            sorted(
                n
                for n in self.neighbors(node, now)
                if self.awake(n, now) and self.energy.alive(n, now)
            )
        )
        charged: Sequence[int] = receivers
        if not frame.is_broadcast:
            charged = tuple(n for n in receivers if n == frame.dst)
        for n in charged:
            self.energy[n].charge_rx(frame.size_bits, now)

        iface.current = frame
        iface.receivers = receivers
        self.listener.transmission_started(node, frame)
        self.engine.call_at(
            end,
            "tx_end",
            lambda: self._finish(node),
            node=node,
            detail=frame.describe(),
        )

    def _finish(self, node: int) -> None:
        iface = self.interfaces[node]
        frame, receivers = iface.current, iface.receivers
        iface.current = None
        iface.receivers = ()
        now = self.engine.now

        if not self.energy.alive(node, now):
            self._drop(node, frame, DropCause.ENERGY)
            self._start_next(node)
            return

        self.metrics.increment_counter("frames_transmitted")
        if frame.is_broadcast:
            for n in receivers:
                if self.energy.alive(n, now):
                    self.listener.frame_received(n, frame)
        elif frame.dst in receivers:
            if self.energy.alive(frame.dst, now):
                self.listener.frame_received(frame.dst, frame)
            else:
                # Transmitted, but the receiver died mid-reception
                self.metrics.increment_counter(
                    "frames_lost", tags={"cause": DropCause.ENERGY.value}
                )
                self.listener.frame_dropped(node, frame, DropCause.ENERGY)
        else:
            self.metrics.increment_counter("link_breaks")
            logger.debug(f"t={now:.6f} link {node}->{frame.dst} broken")
            self.listener.link_broken(node, frame.dst, frame)

        self._start_next(node)

    def frames_in_queue(self) -> int:
        return sum(len(i.queue) + (1 if i.busy else 0) for i in self.interfaces)
