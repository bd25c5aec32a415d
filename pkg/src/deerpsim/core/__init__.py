"""
Simulation core for deerpsim.

The event engine, random streams, mobility, radio medium, energy accounts,
traffic sources and the scenario model that ties them into one run.
"""

from .energy import EnergyAccount, EnergyLedger, EnergyParams, rx_energy, tx_energy
from .engine import Engine, Event, EventHandle, RunSummary
from .mobility import MobilityConfig, MobilityManager, MobilityModel
from .models import BROADCAST, DataPacket, DropCause, Frame, PacketLedger
from .radio import Medium, RadioConfig
from .rng import RngStream
from .scenario import ScenarioConfig, load_config, preset
from .simulation import RunResult, Simulation, run_scenario
from .traffic import CbrFlow, TrafficConfig, build_flows, emit_schedule

__all__ = [
    "Engine",
    "Event",
    "EventHandle",
    "RunSummary",
    "RngStream",
    "MobilityConfig",
    "MobilityManager",
    "MobilityModel",
    "BROADCAST",
    "DataPacket",
    "DropCause",
    "Frame",
    "PacketLedger",
    "Medium",
    "RadioConfig",
    "EnergyAccount",
    "EnergyLedger",
    "EnergyParams",
    "tx_energy",
    "rx_energy",
    "CbrFlow",
    "TrafficConfig",
    "build_flows",
    "emit_schedule",
    "ScenarioConfig",
    "load_config",
    "preset",
    "Simulation",
    "RunResult",
    "run_scenario",
]
