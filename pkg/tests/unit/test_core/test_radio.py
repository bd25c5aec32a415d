"""
Unit tests for the idealized unit-disk medium.
"""

import numpy as np
import pytest

from deerpsim.core.energy import EnergyLedger, EnergyParams
from deerpsim.core.engine import Engine
from deerpsim.core.mobility import MobilityConfig, MobilityManager
from deerpsim.core.models import BROADCAST, ControlMessage, DataPacket, DropCause, Frame
from deerpsim.core.radio import Medium, RadioConfig
from deerpsim.utils.metrics import sum_counters


class Ping(ControlMessage):
    protocol = "TEST"
    msg_type = "PING"

    @property
    def size_bytes(self) -> int:
        return 42


class Recorder:
    """Link listener that keeps every callback."""

    def __init__(self, engine):
        self.engine = engine
        self.received = []
        self.broken = []
        self.dropped = []
        self.started = []

    def frame_received(self, node, frame):
        self.received.append((self.engine.now, node, frame))

    def link_broken(self, node, next_hop, frame):
        self.broken.append((self.engine.now, node, next_hop))

    def frame_dropped(self, node, frame, cause):
        self.dropped.append((node, cause))

    def transmission_started(self, node, frame):
        self.started.append((self.engine.now, node, frame))


def build(positions, sleep=None, energy=None, **radio):
    engine = Engine()
    mobility = MobilityManager(
        MobilityConfig(model="STATIC"), len(positions), 1, 100.0, positions=positions
    )
    ledger = EnergyLedger(len(positions), energy or EnergyParams())
    listener = Recorder(engine)
    medium = Medium(
        engine, mobility, ledger, RadioConfig(**radio), listener, sleep_windows=sleep
    )
    return engine, medium, listener, ledger


# 0 - 1 - 2 in a line, 200 m apart
LINE = [[0.0, 0.0], [200.0, 0.0], [400.0, 0.0]]


def ping(medium, src, dst):
    return Frame(src, dst, medium.frame_bits(Ping().size_bytes), Ping())


def data(medium, src, dst, uid=0):
    packet = DataPacket(uid, 0, uid, src, dst, 512, 0.0, path=[src])
    return Frame(src, dst, medium.frame_bits(512), packet)


class TestMedium:
    """Test delivery, queueing and link failures."""

    def test_frame_bits_include_mac_overhead(self):
        """Test on-air size of a payload."""
        _, medium, _, _ = build(LINE)

        assert medium.frame_bits(512) == (512 + 58) * 8
        assert medium.airtime(2e6) == pytest.approx(1.0)

    def test_neighbors_by_range(self):
        """Test unit-disk connectivity."""
        _, medium, _, _ = build(LINE)

        assert medium.neighbors(0, 0.0) == {1}
        assert medium.neighbors(1, 0.0) == {0, 2}

    def test_unicast_delivered_at_tx_end(self):
        """Test delivery timing of a unicast frame."""
        engine, medium, listener, _ = build(LINE)
        frame = data(medium, 0, 1)

        assert medium.enqueue(0, frame)
        engine.run_until(1.0)

        airtime = (512 + 58) * 8 / 2e6
        assert [(n, f) for _, n, f in listener.received] == [(1, frame)]
        assert listener.received[0][0] == pytest.approx(airtime)
        assert frame.tx_start == 0.0
        assert frame.rx_end == pytest.approx(airtime)

    def test_broadcast_reaches_neighbors_only(self):
        """Test that broadcasts stop at the radio range."""
        engine, medium, listener, _ = build(LINE)
        medium.enqueue(1, ping(medium, 1, BROADCAST))
        medium.enqueue(0, ping(medium, 0, BROADCAST))
        engine.run_until(1.0)

        receivers = sorted((f.src, n) for _, n, f in listener.received)
        assert receivers == [(0, 1), (1, 0), (1, 2)]

    def test_out_of_range_unicast_breaks_link(self):
        """Test link-break feedback to the sender."""
        engine, medium, listener, _ = build(LINE)
        medium.enqueue(0, data(medium, 0, 2))
        engine.run_until(1.0)

        assert listener.received == []
        assert [(n, hop) for _, n, hop in listener.broken] == [(0, 2)]
        assert medium.metrics.get_counter("link_breaks") == 1

    def test_transmissions_serialize(self):
        """Test that a node sends one frame at a time."""
        engine, medium, listener, _ = build(LINE)
        first, second = data(medium, 0, 1, 0), data(medium, 0, 1, 1)
        medium.enqueue(0, first)
        medium.enqueue(0, second)
        engine.run_until(1.0)

        assert second.tx_start == pytest.approx(first.rx_end)
        assert [f for _, _, f in listener.received] == [first, second]

    def test_drop_tail_queue(self):
        """Test overflow of the interface queue."""
        engine, medium, listener, _ = build(LINE, queue_capacity=2)
        results = [medium.enqueue(0, data(medium, 0, 1, uid)) for uid in range(4)]

        assert results == [True, True, True, False]
        assert listener.dropped == [(0, DropCause.QUEUE)]

    def test_control_priority(self):
        """Test that control frames jump queued data when enabled."""
        engine, medium, listener, _ = build(LINE, control_priority=True)
        frames = [data(medium, 0, 1, uid) for uid in range(3)]
        control = ping(medium, 0, 1)
        for frame in frames:
            medium.enqueue(0, frame)
        medium.enqueue(0, control)
        engine.run_until(1.0)

        order = [f for _, _, f in listener.received]
        assert order == [frames[0], control, frames[1], frames[2]]

    def test_energy_charged_to_sender_and_addressee(self):
        """Test that overhearing a unicast costs nothing extra."""
        engine, medium, _, ledger = build(LINE)
        medium.enqueue(1, data(medium, 1, 0))
        engine.run_until(1.0)
        ledger.settle_all(1.0)

        bits = (512 + 58) * 8
        assert ledger[1].consumed_tx == pytest.approx(bits * 330 / 2e6)
        assert ledger[0].consumed_rx == pytest.approx(bits * 230 / 2e6)
        assert ledger[2].consumed_rx == 0.0

    def test_broadcast_charges_every_receiver(self):
        """Test receive energy for a broadcast."""
        engine, medium, _, ledger = build(LINE)
        medium.enqueue(1, ping(medium, 1, BROADCAST))
        engine.run_until(1.0)
        ledger.settle_all(1.0)

        assert ledger[0].consumed_rx > 0.0
        assert ledger[2].consumed_rx > 0.0

    def test_sleeping_node_hears_nothing(self):
        """Test that a sleeping receiver misses frames."""
        engine, medium, listener, _ = build(LINE, sleep={2: [(0.0, 5.0)]})
        medium.enqueue(1, ping(medium, 1, BROADCAST))
        engine.run_until(1.0)

        assert sorted(n for _, n, _ in listener.received) == [0]

    def test_sleeping_sender_waits_for_wake(self):
        """Test that a sleeping node holds its queue until woken."""
        engine, medium, listener, _ = build(LINE, sleep={0: [(0.0, 2.0)]})
        medium.enqueue(0, data(medium, 0, 1))
        engine.run_until(1.0)
        assert listener.started == []

        engine.call_at(2.0, "wake", lambda: medium.wake(0))
        engine.run_until(3.0)

        assert len(listener.received) == 1
        assert listener.started[0][0] == pytest.approx(2.0)

    def test_dead_sender_drops(self):
        """Test that a depleted node drops what it is given."""
        energy = EnergyParams(initial_energy=1.0)
        engine, medium, listener, _ = build(LINE, energy=energy)
        engine.run_until(1.0)

        assert medium.enqueue(0, data(medium, 0, 1)) is False
        assert listener.dropped == [(0, DropCause.ENERGY)]

    def test_frames_in_queue(self):
        """Test the count of queued and in-flight frames."""
        engine, medium, _, _ = build(LINE)
        for uid in range(3):
            medium.enqueue(0, data(medium, 0, 1, uid))

        assert medium.frames_in_queue() == 3
        engine.run_until(1.0)
        assert medium.frames_in_queue() == 0


def frame_residual(medium):
    """Enqueued frames not accounted for as sent, dropped or still queued."""
    counters = medium.metrics.counters()
    settled = (
        counters.get("frames_transmitted", 0)
        + sum_counters(counters, "frames_dropped")
        + medium.frames_in_queue()
    )
    return counters.get("frames_enqueued", 0) - settled


class TestFrameAccounting:
    """Test that every frame handed to the medium is accounted for."""

    def test_queue_overflow_and_delivery(self):
        """Test the balance before, during and after a burst."""
        engine, medium, _, _ = build(LINE, queue_capacity=3)
        for uid in range(6):
            medium.enqueue(0, data(medium, 0, 1, uid))
        medium.enqueue(1, ping(medium, 1, BROADCAST))

        assert medium.metrics.get_counter("frames_dropped", {"cause": "queue"}) == 2
        assert frame_residual(medium) == 0
        engine.run_until(0.005)
        assert frame_residual(medium) == 0
        engine.run_until(1.0)
        assert frame_residual(medium) == 0
        assert medium.frames_in_queue() == 0

    def test_dead_sender(self):
        """Test the balance when queued frames die with their sender."""
        engine, medium, _, _ = build(LINE, energy=EnergyParams(initial_energy=1.0))
        for uid in range(3):
            medium.enqueue(0, data(medium, 0, 1, uid))
        engine.run_until(1.0)
        medium.enqueue(0, data(medium, 0, 1, 9))

        assert frame_residual(medium) == 0
        assert medium.metrics.get_counter("frames_dropped", {"cause": "energy"}) >= 1


class TestNeighborSymmetry:
    """Test that unit-disk links are symmetric."""

    def test_random_mobile_placement(self):
        """Test 20 moving nodes at several instants."""
        engine = Engine()
        config = MobilityConfig(
            model="RWP", width=600.0, height=600.0, speed_min=1.0, speed_max=10.0
        )
        mobility = MobilityManager(config, 20, 13, 100.0)
        ledger = EnergyLedger(20, EnergyParams())
        medium = Medium(engine, mobility, ledger, RadioConfig(), Recorder(engine))

        for t in np.linspace(0.0, 100.0, 11):
            neighbors = {n: medium.neighbors(n, float(t)) for n in range(20)}
            for a in range(20):
                assert a not in neighbors[a]
                for b in neighbors[a]:
                    assert a in neighbors[b], (float(t), a, b)
            assert any(neighbors.values())
