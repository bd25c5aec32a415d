"""
Discrete-event engine.

Events live in a binary heap ordered by ``(fire_at, sequence)``; the sequence
is an insertion counter, so simultaneous events fire in the order they were
scheduled. One engine drives exactly one run and shares nothing with others.
"""

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from ..utils.error_handling import SchedulingInPastError
from ..utils.logging_config import get_logger

logger = get_logger(__name__)

Action = Callable[[], None]


@dataclass
class Event:
    """A pending callback at a point in simulation time."""

    fire_at: float
    kind: str
    action: Optional[Action] = None
    node: int = -1
    detail: str = ""
    sequence: int = -1
    cancelled: bool = False
    fired: bool = False

    def log_line(self) -> str:
        return (
            f"{self.fire_at:.9f},{self.sequence},{self.kind},"
            f"{self.node},{self.detail}"
        )


@dataclass(frozen=True)
class EventHandle:
    """Opaque reference used to cancel a scheduled event."""

    event: Event = field(compare=False)

    @property
    def pending(self) -> bool:
        return not (self.event.cancelled or self.event.fired)

    @property
    def fire_at(self) -> float:
        return self.event.fire_at


@dataclass
class RunSummary:
    """Outcome of ``Engine.run_until``."""

    end_time: float
    events_processed: int
    events_pending: int


class Engine:
    """Single-threaded event loop with a simulation clock."""

    def __init__(self, record_log: bool = False):
        self.now: float = 0.0
        self._heap: List[Tuple[float, int, Event]] = []
        self._next_sequence = 0
        self.events_processed = 0
        self.event_log: Optional[List[str]] = [] if record_log else None

    def schedule(self, event: Event) -> EventHandle:
        """Queue ``event``; its sequence number is assigned here."""
        if math.isnan(event.fire_at) or math.isinf(event.fire_at):
            raise SchedulingInPastError(event.fire_at, self.now)
        if event.fire_at < self.now:
            raise SchedulingInPastError(event.fire_at, self.now)

        event.sequence = self._next_sequence
        self._next_sequence += 1
        heapq.heappush(self._heap, (event.fire_at, event.sequence, event))
        return EventHandle(event)

    def call_at(
        self,
        fire_at: float,
        kind: str,
        action: Action,
        node: int = -1,
        detail: str = "",
    ) -> EventHandle:
        return self.schedule(Event(fire_at, kind, action, node, detail))

    def call_later(
        self,
        delay: float,
        kind: str,
        action: Action,
        node: int = -1,
        detail: str = "",
    ) -> EventHandle:
        return self.schedule(Event(self.now + delay, kind, action, node, detail))

    def cancel(self, handle: Optional[EventHandle]) -> bool:
        """Suppress a pending event; False if it already fired or was cancelled."""
        if handle is None or not handle.pending:
            return False
        handle.event.cancelled = True
        return True

    @property
    def pending(self) -> int:
        return sum(1 for _, _, ev in self._heap if not ev.cancelled)

    def run_until(self, end: float) -> RunSummary:
        """Process every event with ``fire_at <= end``; the clock ends at ``end``."""
        if end < self.now:
            raise SchedulingInPastError(end, self.now)

        processed = 0
        heap = self._heap
        while heap and heap[0][0] <= end:
            fire_at, _, event = heapq.heappop(heap)
            if event.cancelled:
                continue
            self.now = fire_at
            event.fired = True
            if self.event_log is not None:
                self.event_log.append(event.log_line())
            if event.action is not None:
                event.action()
            processed += 1

        self.now = end
        self.events_processed += processed
        logger.debug(f"Engine reached t={end} after {processed} events")
        return RunSummary(
            end_time=end, events_processed=processed, events_pending=self.pending
        )
