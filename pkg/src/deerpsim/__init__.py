"""
deerpsim - Energy-aware MANET routing simulator

A deterministic discrete-event simulator for mobile ad-hoc networks with DSR,
DSDV and AODV routing, a per-mode radio energy model and the DEERP
mode-aware protocol selector.
"""

__version__ = "0.1.0"
__author__ = "deerpsim developers"
__license__ = "MIT"
__description__ = "Energy-aware MANET routing simulator"

from .core.scenario import ScenarioConfig, load_config, preset
from .core.simulation import RunResult, Simulation, run_scenario
from .protocols import PROTOCOLS, create_agent
from .protocols.selection import ProtocolAssignment, RpscTable, srp_select
from .utils.error_handling import DeerpSimError
from .utils.logging_config import get_logger, setup_logging

__all__ = [
    "__version__",
    "__author__",
    "__license__",
    "__description__",
    "ScenarioConfig",
    "load_config",
    "preset",
    "Simulation",
    "RunResult",
    "run_scenario",
    "PROTOCOLS",
    "create_agent",
    "ProtocolAssignment",
    "RpscTable",
    "srp_select",
    "DeerpSimError",
    "get_logger",
    "setup_logging",
]
