"""
Scenario validation utilities.
"""

import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, List

from ..core.mobility import MobilityModel

if TYPE_CHECKING:
    from ..core.scenario import ScenarioConfig


def _is_number(value: Any) -> bool:
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


def _positive(issues: List[str], key: str, value: Any) -> None:
    if not _is_number(value) or value <= 0:
        issues.append(f"{key}: must be a positive number, got {value!r}")


def _non_negative(issues: List[str], key: str, value: Any) -> None:
    if not _is_number(value) or value < 0:
        issues.append(f"{key}: must be zero or positive, got {value!r}")


def _at_least_one(issues: List[str], key: str, value: Any) -> None:
    if value < 1:
        issues.append(f"{key}: must be at least 1, got {value}")


def validate_scenario(config: "ScenarioConfig") -> List[str]:
    """Validate a scenario and return every issue as ``"field: message"``."""
    from ..protocols import PROTOCOLS

    issues: List[str] = []
    n = config.node_count

    if config.protocol not in PROTOCOLS:
        issues.append(
            f"protocol: must be one of {', '.join(PROTOCOLS)}, "
            f"got {config.protocol!r}"
        )
    if not isinstance(config.seed, int) or config.seed < 0:
        issues.append(f"seed: must be a non-negative integer, got {config.seed!r}")
    if not isinstance(n, int) or n < 1:
        issues.append(f"node_count: must be at least 1, got {n!r}")
        n = 0
    _positive(issues, "duration", config.duration)

    # Mobility
    mob = config.mobility
    if mob.model not in {m.value for m in MobilityModel}:
        issues.append(
            f"mobility.model: must be one of RWP, RPGM, STATIC, got {mob.model!r}"
        )
    _positive(issues, "mobility.width", mob.width)
    _positive(issues, "mobility.height", mob.height)
    _positive(issues, "mobility.speed_min", mob.speed_min)
    _positive(issues, "mobility.speed_max", mob.speed_max)
    if mob.speed_min > mob.speed_max:
        issues.append(
            f"mobility.speed_min: {mob.speed_min} exceeds "
            f"mobility.speed_max {mob.speed_max}"
        )
    _non_negative(issues, "mobility.pause", mob.pause)
    _at_least_one(issues, "mobility.rpgm_groups", mob.rpgm_groups)
    _non_negative(issues, "mobility.rpgm_radius", mob.rpgm_radius)

    # Radio and energy
    radio = config.radio
    _positive(issues, "radio.range", radio.range)
    _positive(issues, "radio.bitrate", radio.bitrate)
    _at_least_one(issues, "radio.queue_capacity", radio.queue_capacity)
    if radio.mac_overhead_bytes < 0:
        issues.append(
            "radio.mac_overhead_bytes: must be zero or positive, "
            f"got {radio.mac_overhead_bytes}"
        )

    energy = config.energy
    for name in ("tx_power", "rx_power", "bitrate", "initial_energy"):
        _positive(issues, f"energy.{name}", getattr(energy, name))
    _non_negative(issues, "energy.sleep_power", energy.sleep_power)
    if energy.bitrate != radio.bitrate:
        issues.append(
            f"energy.bitrate: must equal radio.bitrate ({radio.bitrate}), "
            f"got {energy.bitrate}"
        )

    # Routing
    routing = config.routing
    for name in (
        "dsdv_update_interval",
        "discovery_timeout",
        "aodv_active_route_timeout",
    ):
        _positive(issues, f"routing.{name}", getattr(routing, name))
    _non_negative(issues, "routing.dsdv_jitter", routing.dsdv_jitter)
    if routing.discovery_retries < 0:
        issues.append(
            "routing.discovery_retries: must be zero or positive, "
            f"got {routing.discovery_retries}"
        )
    _at_least_one(issues, "routing.buffer_capacity", routing.buffer_capacity)
    _at_least_one(issues, "routing.dsr_cache_size", routing.dsr_cache_size)

    _positive(issues, "deerp.mode_window", config.deerp.mode_window)
    if config.deerp.rpsc_table and not Path(config.deerp.rpsc_table).is_file():
        issues.append(f"deerp.rpsc_table: file not found: {config.deerp.rpsc_table}")

    # Traffic
    traffic = config.traffic
    traffic_free = traffic.flows == 0 and not traffic.pairs
    if not traffic_free and n < 2:
        issues.append(
            f"node_count: traffic needs at least 2 nodes, got {config.node_count}"
        )
    _positive(issues, "traffic.payload_bytes", traffic.payload_bytes)
    _positive(issues, "traffic.rate", traffic.rate)
    _non_negative(issues, "traffic.start", traffic.start)
    if traffic.stop is not None and traffic.stop < traffic.start:
        issues.append(
            f"traffic.stop: {traffic.stop} is before traffic.start {traffic.start}"
        )
    if traffic.flows is not None:
        if traffic.flows < 0:
            issues.append(
                f"traffic.flows: must be zero or positive, got {traffic.flows}"
            )
        elif n >= 2 and traffic.flows > n * (n - 1):
            issues.append(
                f"traffic.flows: at most {n * (n - 1)} distinct flows fit {n} nodes"
            )
    for pair in traffic.pairs:
        if len(pair) != 2:
            issues.append(
                "traffic.pairs: each pair needs a source and a destination, "
                f"got {pair!r}"
            )
            continue
        src, dst = pair
        if src == dst:
            issues.append(
                f"traffic.pairs: source and destination must differ, got {pair!r}"
            )
        if not (0 <= src < n and 0 <= dst < n):
            issues.append(f"traffic.pairs: {pair!r} names a node outside 0..{n - 1}")

    # Placement and sleep
    if config.positions is not None:
        if len(config.positions) != n:
            issues.append(
                f"positions: expected {n} entries, got {len(config.positions)}"
            )
        for pos in config.positions:
            inside = (
                len(pos) == 2
                and 0 <= pos[0] <= mob.width
                and 0 <= pos[1] <= mob.height
            )
            if not inside:
                issues.append(
                    f"positions: {pos!r} lies outside the "
                    f"{mob.width}x{mob.height} area"
                )
    for window in config.sleep_windows:
        if len(window) != 3:
            issues.append(f"sleep_windows: expected [node, start, end], got {window!r}")
            continue
        node, start, end = window
        if not 0 <= int(node) < n:
            issues.append(f"sleep_windows: node {node} outside 0..{n - 1}")
        if not 0 <= start < end:
            issues.append(
                f"sleep_windows: window [{start}, {end}) is empty or negative"
            )

    for point in config.sweep:
        if len(point) != 3 or point[0] < 1 or point[1] <= 0 or point[2] <= 0:
            issues.append(
                "sweep: expected [nodes, width, height] with positive values, "
                f"got {point!r}"
            )

    _positive(issues, "trace.trajectory_interval", config.trace.trajectory_interval)
    _positive(issues, "trace.energy_interval", config.trace.energy_interval)

    return issues
