"""
Routing agents for the simulator.

DSDV is proactive, DSR and AODV are on-demand, and DEERP composes them per
node mode according to the RPSC table.
"""

from typing import Optional

from ..utils.error_handling import UnknownProtocolError
from .aodv import AodvAgent
from .base import NodeServices, ReactiveAgent, RoutingAgent, RoutingParams
from .deerp import DeerpAgent
from .dsdv import DsdvAgent
from .dsr import DsrAgent
from .selection import (
    DeerpParams,
    Mode,
    ModeClassifier,
    ProtocolAssignment,
    RpscRow,
    RpscTable,
    srp_select,
)

PROTOCOLS = ("DSR", "DSDV", "AODV", "DEERP")


def normalize_protocol(name: str) -> str:
    protocol = name.strip().upper()
    if protocol not in PROTOCOLS:
        raise UnknownProtocolError(name, list(PROTOCOLS))
    return protocol


# Agent factory
def create_agent(
    protocol: str,
    node: NodeServices,
    params: RoutingParams,
    assignment: Optional[ProtocolAssignment] = None,
    classifier: Optional[ModeClassifier] = None,
) -> RoutingAgent:
    """Build the routing agent for one node."""
    protocol = normalize_protocol(protocol)

    if protocol == "DSDV":
        return DsdvAgent(node, params)
    elif protocol == "DSR":
        return DsrAgent(node, params)
    elif protocol == "AODV":
        return AodvAgent(node, params)
    else:
        if assignment is None or classifier is None:
            raise ValueError(
                "DEERP agents need a protocol assignment and a mode classifier"
            )
        return DeerpAgent(node, params, assignment, classifier)


__all__ = [
    "PROTOCOLS",
    "RoutingAgent",
    "ReactiveAgent",
    "RoutingParams",
    "NodeServices",
    "DsdvAgent",
    "DsrAgent",
    "AodvAgent",
    "DeerpAgent",
    "DeerpParams",
    "Mode",
    "ModeClassifier",
    "ProtocolAssignment",
    "RpscRow",
    "RpscTable",
    "srp_select",
    "create_agent",
    "normalize_protocol",
]
