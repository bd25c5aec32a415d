"""
Scenario configuration, dotted-key overrides and built-in presets.

A scenario is a tree of dataclasses. Its flat form maps dotted keys such as
``mobility.speed_max`` or ``traffic.flows`` to values; that form is what
config files, ``--set`` overrides and run manifests use.
"""

import copy
import typing
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Union

from ..protocols.base import RoutingParams
from ..protocols.selection import DeerpParams
from ..utils.error_handling import UnknownPresetError, ValidationError
from ..utils.file_utils import load_mapping
from .energy import EnergyParams
from .mobility import MobilityConfig
from .radio import RadioConfig
from .traffic import TrafficConfig


@dataclass
class TraceConfig:
    enabled: bool = False
    event_log: bool = False
    trajectory_interval: float = 1.0
    energy_interval: float = 10.0


@dataclass
class SweepPoint:
    node_count: int
    width: float
    height: float


SECTIONS = ("mobility", "radio", "energy", "routing", "deerp", "traffic", "trace")


@dataclass
class ScenarioConfig:
    """Complete description of one experiment."""

    name: str = "custom"
    protocol: str = "DEERP"
    seed: int = 1
    node_count: int = 10
    duration: float = 300.0
    mobility: MobilityConfig = field(default_factory=MobilityConfig)
    radio: RadioConfig = field(default_factory=RadioConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    routing: RoutingParams = field(default_factory=RoutingParams)
    deerp: DeerpParams = field(default_factory=DeerpParams)
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    trace: TraceConfig = field(default_factory=TraceConfig)
    positions: Optional[List[List[float]]] = None
    sleep_windows: List[List[float]] = field(default_factory=list)
    sweep: List[List[float]] = field(default_factory=list)

    @property
    def pause(self) -> float:
        return self.mobility.pause

    @property
    def sweep_points(self) -> List[SweepPoint]:
        return [SweepPoint(int(p[0]), float(p[1]), float(p[2])) for p in self.sweep]

    @property
    def node_counts(self) -> List[int]:
        if self.sweep:
            return [p.node_count for p in self.sweep_points]
        return [self.node_count]

    def copy(self, **changes: Any) -> "ScenarioConfig":
        clone = copy.deepcopy(self)
        for key, value in changes.items():
            setattr(clone, key, value)
        return clone

    def at_point(self, point: SweepPoint) -> "ScenarioConfig":
        clone = self.copy(node_count=point.node_count, sweep=[])
        clone.mobility.width = point.width
        clone.mobility.height = point.height
        return clone

    def expand(self) -> List["ScenarioConfig"]:
        """One concrete scenario per sweep point, or just this one."""
        if not self.sweep:
            return [self.copy()]
        return [self.at_point(p) for p in self.sweep_points]

    def for_node_count(self, node_count: int) -> "ScenarioConfig":
        """The sweep point with ``node_count``, keeping its area, without the sweep."""
        for point in self.sweep_points:
            if point.node_count == node_count:
                return self.at_point(point)
        return self.copy(node_count=node_count, sweep=[])

    def validate(self) -> "ScenarioConfig":
        from ..utils.validation import validate_scenario

        issues = validate_scenario(self)
        if issues:
            key, _, message = issues[0].partition(": ")
            raise ValidationError(
                key, self._lookup(key), message or issues[0], issues=issues
            )
        return self

    def _lookup(self, key: str) -> Any:
        return self.to_flat().get(key)

    def to_flat(self) -> Dict[str, Any]:
        flat: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in SECTIONS:
                for sub in fields(value):
                    sub_value = getattr(value, sub.name)
                    flat[f"{f.name}.{sub.name}"] = copy.deepcopy(sub_value)
            else:
                flat[f.name] = copy.deepcopy(value)
        return flat

    @classmethod
    def from_flat(
        cls, mapping: Mapping[str, Any], base: Optional["ScenarioConfig"] = None
    ) -> "ScenarioConfig":
        config = copy.deepcopy(base) if base is not None else cls()
        config.apply(mapping)
        return config

    def apply(self, mapping: Mapping[str, Any]) -> "ScenarioConfig":
        """Apply dotted-key (or nested) overrides in place."""
        for key, value in flatten(mapping).items():
            self.set(key, value)
        return self

    def set(self, key: str, value: Any) -> None:
        head, _, tail = key.partition(".")
        if head in SECTIONS and tail:
            target = getattr(self, head)
            name = tail
        elif not tail and head not in SECTIONS:
            target = self
            name = head
        else:
            raise ValidationError(key, value, f"Unknown configuration key: {key}")

        names = {f.name for f in fields(target)}
        if name not in names:
            raise ValidationError(key, value, f"Unknown configuration key: {key}")
        hints = typing.get_type_hints(type(target))
        setattr(target, name, coerce(key, value, hints[name]))


def flatten(mapping: Mapping[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Turn nested section mappings into dotted keys."""
    flat: Dict[str, Any] = {}
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping) and not prefix and key in SECTIONS:
            flat.update(flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def coerce(key: str, value: Any, hint: Any) -> Any:
    """Convert ``value`` to the annotated type of a config field."""
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if origin is Union and type(None) in args:
        if value is None or (
            isinstance(value, str) and value.strip().lower() in ("none", "null", "")
        ):
            return None
        hint = next(a for a in args if a is not type(None))
        origin = typing.get_origin(hint)

    try:
        if hint is bool:
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered in ("true", "yes", "on", "1"):
                    return True
                if lowered in ("false", "no", "off", "0"):
                    return False
                raise ValueError(value)
            return bool(value)
        if hint is int:
            if isinstance(value, bool):
                raise ValueError(value)
            number = float(value)
            if not number.is_integer():
                raise ValueError(value)
            return int(number)
        if hint is float:
            if isinstance(value, bool):
                raise ValueError(value)
            return float(value)
        if hint is str:
            return str(value)
        if origin in (list, List):
            if not isinstance(value, (list, tuple)):
                raise ValueError(value)
            return [list(v) if isinstance(v, (list, tuple)) else v for v in value]
    except (TypeError, ValueError):
        type_name = getattr(hint, "__name__", hint)
        raise ValidationError(key, value, f"{key}: cannot use {value!r} as {type_name}")
    return value


def load_config(
    path: Union[str, Path], base: Optional[ScenarioConfig] = None
) -> ScenarioConfig:
    """Load a YAML/JSON config file; run manifests are accepted too."""
    mapping = load_mapping(path)
    if isinstance(mapping.get("config"), Mapping):
        mapping = mapping["config"]
    return ScenarioConfig.from_flat(mapping, base=base)


def _sim1() -> ScenarioConfig:
    config = ScenarioConfig(name="sim1", duration=900.0, node_count=20)
    config.mobility = MobilityConfig(
        model="RPGM",
        width=500.0,
        height=500.0,
        speed_min=0.5,
        speed_max=5.0,
        pause=0.0,
    )
    config.sweep = [
        [20, 500.0, 500.0],
        [40, 1000.0, 1000.0],
        [60, 1500.0, 1500.0],
        [80, 2000.0, 2000.0],
    ]
    return config


def _sim2() -> ScenarioConfig:
    # Inherits everything from sim1 except what its own table changes
    config = _sim1()
    config.name = "sim2"
    config.duration = 300.0
    config.node_count = 5
    config.mobility.model = "RWP"
    config.mobility.width = 600.0
    config.mobility.height = 600.0
    config.sweep = [[n, 600.0, 600.0] for n in (5, 10, 15, 20, 25)]
    return config


PRESETS: Dict[str, Callable[[], ScenarioConfig]] = {"sim1": _sim1, "sim2": _sim2}


def preset(name: str) -> ScenarioConfig:
    key = name.strip().lower()
    if key not in PRESETS:
        raise UnknownPresetError(name, sorted(PRESETS))
    return PRESETS[key]()
