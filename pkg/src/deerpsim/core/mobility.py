"""
Node mobility: Random Waypoint, Reference Point Group Mobility and static
placement.

Trajectories are generated once, up to the simulation horizon, before the
first event fires. Each node draws from its own mobility substream, so the
paths depend only on the seed and never on what the routing layer does.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .models import Position
from .rng import MOBILITY, RngStream, combined_digest


class MobilityModel(str, Enum):
    RWP = "RWP"
    RPGM = "RPGM"
    STATIC = "STATIC"


@dataclass
class MobilityConfig:
    """Terrain and movement parameters."""

    model: str = MobilityModel.RWP.value
    width: float = 600.0
    height: float = 600.0
    speed_min: float = 1.0
    speed_max: float = 10.0
    pause: float = 0.0
    rpgm_groups: int = 4
    rpgm_radius: float = 50.0


@dataclass(frozen=True)
class Waypoint:
    """Next destination of a node, with the speed it travels at."""

    target: Position
    speed: float
    depart_at: float


class Trajectory:
    """Piecewise-linear path through ``(time, x, y)`` breakpoints."""

    def __init__(
        self,
        times: Sequence[float],
        xs: Sequence[float],
        ys: Sequence[float],
        bounds: Optional[Tuple[float, float]] = None,
    ):
        self.times = np.asarray(times, dtype=np.float64)
        self.xs = np.asarray(xs, dtype=np.float64)
        self.ys = np.asarray(ys, dtype=np.float64)
        self.bounds = bounds

    def position_at(self, t: float) -> Position:
        x = float(np.interp(t, self.times, self.xs))
        y = float(np.interp(t, self.times, self.ys))
        if self.bounds is not None:
            x = min(max(x, 0.0), self.bounds[0])
            y = min(max(y, 0.0), self.bounds[1])
        return Position(x, y)

    @property
    def end_time(self) -> float:
        return float(self.times[-1])


class RandomWaypoint:
    """Leg generator for the Random Waypoint model."""

    def __init__(self, config: MobilityConfig):
        self.config = config

    def random_position(self, rng: RngStream) -> Position:
        return Position(
            rng.uniform(0.0, self.config.width), rng.uniform(0.0, self.config.height)
        )

    def next_leg(self, now: float, rng: RngStream) -> Waypoint:
        """Draw the next leg for a node that has just arrived."""
        target = self.random_position(rng)
        speed = rng.uniform(self.config.speed_min, self.config.speed_max)
        return Waypoint(target=target, speed=speed, depart_at=now + self.config.pause)

    def build(self, start: Position, horizon: float, rng: RngStream) -> Trajectory:
        times = [0.0]
        xs = [start.x]
        ys = [start.y]
        now = 0.0
        here = start

        while now < horizon:
            leg = self.next_leg(now, rng)
            if leg.depart_at > now:
                times.append(leg.depart_at)
                xs.append(here.x)
                ys.append(here.y)
            arrive = leg.depart_at + here.distance_to(leg.target) / leg.speed
            if arrive <= times[-1]:
                # Zero-length leg with no pause
                now = arrive
                continue
            times.append(arrive)
            xs.append(leg.target.x)
            ys.append(leg.target.y)
            now = arrive
            here = leg.target

        return Trajectory(times, xs, ys)


def disk_sample(radius: float, rng: RngStream) -> Tuple[float, float]:
    """Uniform point in a disk of the given radius around the origin."""
    r = radius * math.sqrt(rng.uniform())
    theta = 2.0 * math.pi * rng.uniform()
    return r * math.cos(theta), r * math.sin(theta)


def group_of(node: int, node_count: int, groups: int) -> int:
    """Groups are contiguous blocks of node ids."""
    return node * groups // node_count


class MobilityManager:
    """Owns every node's trajectory for one run."""

    def __init__(
        self,
        config: MobilityConfig,
        node_count: int,
        seed: int,
        horizon: float,
        positions: Optional[Sequence[Sequence[float]]] = None,
    ):
        self.config = config
        self.node_count = node_count
        self.horizon = horizon
        self.streams = [RngStream(seed, MOBILITY, node) for node in range(node_count)]
        self.trajectories: List[Trajectory] = []
        self.leaders: Dict[int, int] = {}
        self._cache_time: Optional[float] = None
        self._cache: Optional[np.ndarray] = None

        model = MobilityModel(config.model)
        rwp = RandomWaypoint(config)
        if positions is not None:
            starts = [Position(float(p[0]), float(p[1])) for p in positions]
        else:
            starts = [rwp.random_position(self.streams[n]) for n in range(node_count)]

        if model is MobilityModel.STATIC:
            self.trajectories = [Trajectory([0.0], [p.x], [p.y]) for p in starts]
        elif model is MobilityModel.RWP:
            self.trajectories = [
                rwp.build(starts[n], horizon, self.streams[n])
                for n in range(node_count)
            ]
        else:
            self._build_rpgm(rwp, starts)

    def _build_rpgm(self, rwp: RandomWaypoint, starts: List[Position]) -> None:
        groups = max(1, min(self.config.rpgm_groups, self.node_count))
        bounds = (self.config.width, self.config.height)
        leader_paths: Dict[int, Trajectory] = {}

        for node in range(self.node_count):
            group = group_of(node, self.node_count, groups)
            if group not in leader_paths:
                leader_paths[group] = rwp.build(
                    starts[node], self.horizon, self.streams[node]
                )
                self.leaders[group] = node
                self.trajectories.append(leader_paths[group])
                continue

            leader = leader_paths[group]
            offsets = self._member_offsets(leader, self.streams[node])
            xs = leader.xs + offsets[:, 0]
            ys = leader.ys + offsets[:, 1]
            self.trajectories.append(Trajectory(leader.times, xs, ys, bounds=bounds))

    def _member_offsets(self, leader: Trajectory, stream: RngStream) -> np.ndarray:
        """
        One deviation from the leader per leader breakpoint.

        Each deviation is drawn uniformly from the group disk, then pulled
        towards the previous one until the member's leg speed is back inside
        ``[speed_min, speed_max]``. Pause legs keep the previous deviation.
        """
        config = self.config
        offsets = np.empty((len(leader.times), 2), dtype=np.float64)
        offsets[0] = disk_sample(config.rpgm_radius, stream)

        for k in range(1, len(leader.times)):
            candidate = np.asarray(disk_sample(config.rpgm_radius, stream))
            dt = leader.times[k] - leader.times[k - 1]
            dx = leader.xs[k] - leader.xs[k - 1]
            dy = leader.ys[k] - leader.ys[k - 1]
            speed = math.hypot(dx, dy) / dt
            margin = min(speed - config.speed_min, config.speed_max - speed)
            slack = max(0.0, margin) * dt

            step = candidate - offsets[k - 1]
            length = math.hypot(step[0], step[1])
            if length > slack:
                step *= slack / length
            offsets[k] = offsets[k - 1] + step
        return offsets

    def leader_of(self, node: int) -> int:
        if not self.leaders:
            return node
        groups = len(self.leaders)
        return self.leaders[group_of(node, self.node_count, groups)]

    def position_at(self, node: int, t: float) -> Position:
        return self.trajectories[node].position_at(t)

    def positions_at(self, t: float) -> np.ndarray:
        """``(node_count, 2)`` array of positions at time ``t``."""
        if self._cache_time != t:
            coords = np.empty((self.node_count, 2), dtype=np.float64)
            for node, path in enumerate(self.trajectories):
                p = path.position_at(t)
                coords[node, 0] = p.x
                coords[node, 1] = p.y
            self._cache = coords
            self._cache_time = t
        return self._cache

    def digest(self) -> str:
        return combined_digest(self.streams)

    def sample(self, interval: float, until: Optional[float] = None) -> pd.DataFrame:
        """Trajectory dump with columns time, node, x, y."""
        until = self.horizon if until is None else until
        steps = int(math.floor(until / interval + 1e-9))
        rows = []
        for k in range(steps + 1):
            t = k * interval
            for node in range(self.node_count):
                p = self.position_at(node, t)
                rows.append((t, node, p.x, p.y))
        return pd.DataFrame(rows, columns=["time", "node", "x", "y"])
