"""
One simulation run: builds the node stack from a scenario, drives the engine
to the configured duration and collects everything the reports need.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..protocols import create_agent
from ..protocols.base import RoutingAgent
from ..protocols.selection import (
    ModeClassifier,
    ProtocolAssignment,
    RpscTable,
    srp_select,
)
from ..utils.logging_config import get_logger
from ..utils.metrics import MetricsCollector
from .energy import SLEEP, EnergyLedger
from .engine import Engine, RunSummary
from .mobility import MobilityManager
from .models import (
    BROADCAST,
    ControlMessage,
    DataPacket,
    DropCause,
    Frame,
    PacketLedger,
)
from .radio import Medium
from .rng import JITTER, TRAFFIC, RngStream
from .scenario import ScenarioConfig
from .traffic import CbrFlow, build_flows, emit_schedule

logger = get_logger(__name__)


class Node:
    """Services one node's routing agent sees."""

    def __init__(self, node_id: int, sim: "Simulation"):
        self.node_id = node_id
        self.sim = sim
        self.engine = sim.engine
        self.metrics = sim.metrics
        self.jitter = RngStream(sim.config.seed, JITTER, node_id)
        self.agent: Optional[RoutingAgent] = None

    def _frame(self, dst: int, payload: Union[DataPacket, ControlMessage]) -> Frame:
        if isinstance(payload, DataPacket):
            size = payload.payload_bytes + payload.header_bytes
        else:
            size = payload.size_bytes
        return Frame(self.node_id, dst, self.sim.medium.frame_bits(size), payload)

    def send(self, next_hop: int, payload: Union[DataPacket, ControlMessage]) -> bool:
        return self.sim.medium.enqueue(self.node_id, self._frame(next_hop, payload))

    def send_broadcast(self, msg: ControlMessage) -> bool:
        return self.sim.medium.enqueue(self.node_id, self._frame(BROADCAST, msg))

    def deliver(self, packet: DataPacket) -> None:
        if self.sim.ledger.deliver(packet, self.engine.now):
            self.metrics.increment_counter("packets_delivered")

    def drop(self, packet: DataPacket, cause: DropCause) -> None:
        if self.sim.ledger.drop(packet, cause):
            self.metrics.increment_counter(
                "packets_dropped", tags={"cause": DropCause(cause).value}
            )

    def alive(self) -> bool:
        return self.sim.energy.alive(self.node_id, self.engine.now)


@dataclass
class RunResult:
    """Everything one finished run produced."""

    config: ScenarioConfig
    assignment: Optional[ProtocolAssignment]
    flows: List[CbrFlow]
    ledger: PacketLedger
    energy: pd.DataFrame
    counters: Dict[str, int]
    summary: RunSummary
    mobility_digest: str
    traffic_digest: str
    event_log: Optional[List[str]] = None
    mode_timelines: Dict[int, List[Tuple[float, float, str]]] = field(
        default_factory=dict
    )
    energy_samples: Optional[pd.DataFrame] = None
    trajectories: Optional[pd.DataFrame] = None
    deaths: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def duration(self) -> float:
        return self.config.duration

    def modes_table(self) -> pd.DataFrame:
        rows = [
            (start, node, mode, end)
            for node, segments in sorted(self.mode_timelines.items())
            for start, end, mode in segments
        ]
        return pd.DataFrame(rows, columns=["time", "node", "mode", "end"])


class Simulation:
    """Node stack and event wiring for a single scenario."""

    def __init__(self, config: ScenarioConfig, rpsc_table: Optional[RpscTable] = None):
        config.validate()
        self.config = config
        n = config.node_count
        trace = config.trace

        self.engine = Engine(record_log=trace.enabled or trace.event_log)
        self.metrics = MetricsCollector()
        self.ledger = PacketLedger()
        self.deaths: List[Tuple[int, float]] = []
        self.mobility = MobilityManager(
            config.mobility,
            n,
            config.seed,
            config.duration,
            positions=config.positions,
        )
        self.energy = EnergyLedger(n, config.energy, on_death=self._on_death)

        self.sleep: Dict[int, List[Tuple[float, float]]] = {}
        for node, start, end in config.sleep_windows:
            self.sleep.setdefault(int(node), []).append((float(start), float(end)))

        self.medium = Medium(
            self.engine,
            self.mobility,
            self.energy,
            config.radio,
            self,
            self.metrics,
            self.sleep,
        )
        self.classifiers = [
            ModeClassifier(config.deerp.mode_window, self.sleep.get(i, ()))
            for i in range(n)
        ]

        self.assignment: Optional[ProtocolAssignment] = None
        if config.protocol == "DEERP":
            table = rpsc_table
            if table is None and config.deerp.rpsc_table:
                table = RpscTable.load(config.deerp.rpsc_table)
            elif table is None:
                table = RpscTable.default()
            self.assignment = srp_select(
                table,
                config.mobility.model,
                n,
                config.mobility.speed_max,
                nearest_fallback=config.deerp.nearest_fallback,
            )
            logger.info(
                f"DEERP assignment for {config.mobility.model}/{n} nodes: "
                f"{self.assignment.to_dict()}"
            )

        self.nodes = [Node(i, self) for i in range(n)]
        for node in self.nodes:
            node.agent = create_agent(
                config.protocol,
                node,
                config.routing,
                self.assignment,
                self.classifiers[node.node_id],
            )

        self.traffic_rng = RngStream(config.seed, TRAFFIC)
        self.flows: List[CbrFlow] = []
        if not (config.traffic.flows == 0 and not config.traffic.pairs):
            self.flows = build_flows(
                n, config.traffic, self.traffic_rng, config.duration
            )
        self._energy_samples: List[pd.DataFrame] = []

    # Link-layer callbacks

    def frame_received(self, node: int, frame: Frame) -> None:
        agent = self.nodes[node].agent
        payload = frame.payload
        if frame.dst == node:
            self.classifiers[node].record_rx(self.engine.now)
        if isinstance(payload, DataPacket):
            payload.path.append(node)
            agent.receive_data(payload, frame.src)
        else:
            agent.handle_control(payload, frame.src)

    def link_broken(self, node: int, next_hop: int, frame: Frame) -> None:
        self.nodes[node].agent.handle_link_break(next_hop, frame)

    def frame_dropped(self, node: int, frame: Frame, cause: DropCause) -> None:
        if isinstance(frame.payload, DataPacket):
            self.nodes[node].drop(frame.payload, cause)
        else:
            tags = {"protocol": frame.payload.protocol, "cause": cause.value}
            self.metrics.increment_counter("control_dropped", tags=tags)

    def transmission_started(self, node: int, frame: Frame) -> None:
        self.classifiers[node].record_tx(self.engine.now)
        if frame.is_control:
            tags = {"protocol": frame.payload.protocol, "type": frame.payload.msg_type}
            self.metrics.increment_counter("control_frames", tags=tags)
            self.metrics.increment_counter(
                "control_bytes", value=frame.payload.size_bytes, tags=tags
            )
        else:
            self.metrics.increment_counter("data_frames")

    # Scheduling

    def _on_death(self, node: int, at: float) -> None:
        self.deaths.append((node, at))
        self.metrics.increment_counter("node_deaths")
        logger.debug(f"t={at:.6f} node {node} ran out of energy")

    def _schedule_flow(self, flow: CbrFlow) -> None:
        times = emit_schedule(flow)

        def emit(k: int) -> None:
            now = self.engine.now
            packet = self.ledger.originate(
                flow.flow_id, k, flow.src, flow.dst, flow.payload_bytes, now
            )
            self.metrics.increment_counter("packets_originated")
            node = self.nodes[flow.src]
            if not node.alive():
                node.drop(packet, DropCause.ENERGY)
            else:
                self.classifiers[flow.src].record_tx(now)
                node.agent.originate(packet)
            if k + 1 < len(times):
                self._emit_at(flow, times, k + 1, emit)

        if len(times):
            self._emit_at(flow, times, 0, emit)

    def _emit_at(self, flow: CbrFlow, times: np.ndarray, k: int, emit) -> None:
        self.engine.call_at(
            float(times[k]),
            "traffic",
            lambda: emit(k),
            node=flow.src,
            detail=f"flow:{flow.flow_id}:{k}",
        )

    def _schedule_sleep(self) -> None:
        for node, windows in sorted(self.sleep.items()):
            for start, end in windows:
                self.energy[node].add_interval(start, end, SLEEP)
                if end <= self.config.duration:
                    self.engine.call_at(
                        end, "wake", lambda n=node: self.medium.wake(n), node=node
                    )

    def _schedule_energy_samples(self) -> None:
        interval = self.config.trace.energy_interval
        steps = int(np.floor(self.config.duration / interval + 1e-9))
        for k in range(steps + 1):
            self.engine.call_at(k * interval, "energy_sample", self._sample_energy)

    def _sample_energy(self) -> None:
        self._energy_samples.append(self.energy.snapshot(self.engine.now))

    def run(self) -> RunResult:
        config = self.config
        logger.info(
            f"Running {config.protocol} on {config.node_count} nodes "
            f"({config.mobility.model}, {config.duration:g} s, seed {config.seed})"
        )
        self._schedule_sleep()
        for node in self.nodes:
            node.agent.start()
        for flow in self.flows:
            self._schedule_flow(flow)
        if config.trace.enabled:
            self._schedule_energy_samples()

        summary = self.engine.run_until(config.duration)
        self.energy.settle_all(config.duration)

        buffered = [uid for node in self.nodes for uid in node.agent.buffered_uids()]
        self.ledger.close(buffered)
        self.metrics.increment_counter(
            "frames_queued_at_end", self.medium.frames_in_queue()
        )

        energy_samples = None
        if self._energy_samples:
            energy_samples = pd.concat(self._energy_samples, ignore_index=True)
        trajectories = None
        if config.trace.enabled:
            trajectories = self.mobility.sample(config.trace.trajectory_interval)
        timelines = {
            i: [(a, b, mode.value) for a, b, mode in c.timeline(config.duration)]
            for i, c in enumerate(self.classifiers)
        }
        result = RunResult(
            config=config,
            assignment=self.assignment,
            flows=list(self.flows),
            ledger=self.ledger,
            energy=self.energy.final_table(),
            counters=self.metrics.counters(),
            summary=summary,
            mobility_digest=self.mobility.digest(),
            traffic_digest=self.traffic_rng.digest(),
            event_log=self.engine.event_log,
            mode_timelines=timelines,
            energy_samples=energy_samples,
            trajectories=trajectories,
            deaths=sorted(self.deaths, key=lambda d: (d[1], d[0])),
        )
        logger.info(
            f"Run finished: {summary.events_processed} events, "
            f"{len(self.ledger.delivered())}/{self.ledger.originated} packets delivered"
        )
        return result


def run_scenario(
    config: ScenarioConfig, rpsc_table: Optional[RpscTable] = None
) -> RunResult:
    """Build and run one scenario."""
    return Simulation(config, rpsc_table=rpsc_table).run()
