"""
Fixtures for driving routing agents without a radio.
"""

import pytest

from deerpsim.core.engine import Engine
from deerpsim.core.models import BROADCAST
from deerpsim.core.rng import JITTER, RngStream
from deerpsim.protocols.base import RoutingParams
from deerpsim.utils.metrics import MetricsCollector


class FakeNode:
    """NodeServices stand-in that records what the agent asks for."""

    def __init__(self, node_id: int, engine: Engine):
        self.node_id = node_id
        self.engine = engine
        self.jitter = RngStream(1, JITTER, node_id)
        self.metrics = MetricsCollector()
        self.sent = []
        self.delivered = []
        self.dropped = []
        self.is_alive = True

    def send(self, next_hop, payload):
        self.sent.append((next_hop, payload))
        return True

    def send_broadcast(self, msg):
        self.sent.append((BROADCAST, msg))
        return True

    def deliver(self, packet):
        self.delivered.append(packet)

    def drop(self, packet, cause):
        self.dropped.append((packet, cause))

    def alive(self):
        return self.is_alive

    def broadcasts(self):
        return [msg for hop, msg in self.sent if hop == BROADCAST]


@pytest.fixture
def engine():
    return Engine()


@pytest.fixture
def make_node(engine):
    """Factory for fake nodes sharing one engine."""

    def factory(node_id: int = 0) -> FakeNode:
        return FakeNode(node_id, engine)

    return factory


@pytest.fixture
def params():
    return RoutingParams()
