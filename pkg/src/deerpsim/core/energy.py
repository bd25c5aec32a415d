"""
Per-node energy accounting.

Radio activity is registered as ``(start, end, mode)`` intervals and charged
lazily when an account is settled up to some time. Overlapping intervals are
resolved by precedence Tx > Rx > Sleep > Idle, so every instant is charged
exactly once. Powers are in mW, times in seconds and energies in mJ.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from ..utils.error_handling import DeadNodeError, NonPositiveSizeError
from ..utils.logging_config import get_logger

logger = get_logger(__name__)

TX = "tx"
RX = "rx"
SLEEP = "sleep"
IDLE = "idle"
OFF = "off"

ENERGY_MODES = (IDLE, SLEEP, TX, RX)
_PRECEDENCE = {TX: 3, RX: 2, SLEEP: 1, IDLE: 0}
SNAPSHOT_COLUMNS = ["node", "idle_mJ", "sleep_mJ", "tx_mJ", "rx_mJ", "remaining_mJ"]


@dataclass
class EnergyParams:
    tx_power: float = 330.0
    rx_power: float = 230.0
    bitrate: float = 2e6
    sleep_power: float = 0.0
    initial_energy: float = 1_000_000.0

    @property
    def idle_power(self) -> float:
        # Idle listening draws receive power
        return self.rx_power

    def power(self, mode: str) -> float:
        return {
            TX: self.tx_power,
            RX: self.rx_power,
            SLEEP: self.sleep_power,
            IDLE: self.idle_power,
        }[mode]


DEFAULT_PARAMS = EnergyParams()


def _check_size(pkt_size_bits: float) -> None:
    if pkt_size_bits <= 0:
        raise NonPositiveSizeError(pkt_size_bits)


def tx_energy(pkt_size_bits: float, params: EnergyParams = DEFAULT_PARAMS) -> float:
    """Energy (mJ) to transmit a packet of ``pkt_size_bits``."""
    _check_size(pkt_size_bits)
    return pkt_size_bits * params.tx_power / params.bitrate


def rx_energy(pkt_size_bits: float, params: EnergyParams = DEFAULT_PARAMS) -> float:
    """Energy (mJ) to receive a packet of ``pkt_size_bits``."""
    _check_size(pkt_size_bits)
    return pkt_size_bits * params.rx_power / params.bitrate


class EnergyAccount:
    """Energy state of one node."""

    def __init__(self, node: int, params: EnergyParams = DEFAULT_PARAMS):
        self.node = node
        self.params = params
        self.initial_energy = params.initial_energy
        self.remaining = params.initial_energy
        self.consumed: Dict[str, float] = {mode: 0.0 for mode in ENERGY_MODES}
        self.durations: Dict[str, float] = {mode: 0.0 for mode in ENERGY_MODES + (OFF,)}
        self.last_accrual_at = 0.0
        self.alive = params.initial_energy > 0
        self.died_at: Optional[float] = None
        self._intervals: List[Tuple[float, float, str]] = []

    @property
    def consumed_idle(self) -> float:
        return self.consumed[IDLE]

    @property
    def consumed_sleep(self) -> float:
        return self.consumed[SLEEP]

    @property
    def consumed_tx(self) -> float:
        return self.consumed[TX]

    @property
    def consumed_rx(self) -> float:
        return self.consumed[RX]

    @property
    def total_consumed(self) -> float:
        return sum(self.consumed.values())

    def add_interval(self, start: float, end: float, mode: str) -> None:
        """Register radio activity; the part before the watermark is ignored."""
        if end > start and end > self.last_accrual_at:
            self._intervals.append((start, end, mode))

    def settle(self, t: float) -> None:
        """Charge everything up to time ``t``."""
        w = self.last_accrual_at
        if t <= w:
            return

        active = [iv for iv in self._intervals if iv[1] > w and iv[0] < t]
        cuts = {w, t}
        for start, end, _ in active:
            if w < start < t:
                cuts.add(start)
            if w < end < t:
                cuts.add(end)
        points = sorted(cuts)

        for a, b in zip(points, points[1:]):
            mode = IDLE
            for start, end, m in active:
                if start <= a and end >= b and _PRECEDENCE[m] > _PRECEDENCE[mode]:
                    mode = m
            self._charge(mode, a, b)

        self.last_accrual_at = t
        self._intervals = [iv for iv in self._intervals if iv[1] > t]

    def _charge(self, mode: str, a: float, b: float) -> None:
        span = b - a
        if not self.alive:
            self.durations[OFF] += span
            return

        power = self.params.power(mode)
        energy = power * span
        if power > 0 and energy >= self.remaining:
            # Linear depletion inside the piece
            lived = self.remaining / power
            self.consumed[mode] += self.remaining
            self.durations[mode] += lived
            self.durations[OFF] += span - lived
            self.remaining = 0.0
            self.alive = False
            self.died_at = a + lived
            logger.debug(
                f"Node {self.node} depleted at t={self.died_at:.6f} while in {mode}"
            )
            return

        self.consumed[mode] += energy
        self.durations[mode] += span
        self.remaining -= energy

    def accrue_idle(self, start: float, end: float) -> None:
        """Charge idle power over ``[start, end)``."""
        if start < self.last_accrual_at:
            raise ValueError(
                f"idle accrual from {start} precedes watermark {self.last_accrual_at}"
            )
        if end < start:
            raise ValueError(f"idle accrual interval is reversed: [{start}, {end})")
        self.settle(start)
        if end > start:
            self._charge(IDLE, start, end)
            self.last_accrual_at = end

    def _charge_frame(self, size_bits: float, at: float, mode: str) -> float:
        _check_size(size_bits)
        self.settle(at)
        if not self.alive:
            raise DeadNodeError(self.node, at)
        end = at + size_bits / self.params.bitrate
        self.add_interval(at, end, mode)
        return end

    def charge_tx(self, size_bits: float, at: float) -> float:
        """Register a transmission starting at ``at``; returns its end time."""
        return self._charge_frame(size_bits, at, TX)

    def charge_rx(self, size_bits: float, at: float) -> float:
        """Register a reception starting at ``at``; returns its end time."""
        return self._charge_frame(size_bits, at, RX)

    def snapshot(self) -> Dict[str, float]:
        return {
            "node": self.node,
            "idle_mJ": self.consumed[IDLE],
            "sleep_mJ": self.consumed[SLEEP],
            "tx_mJ": self.consumed[TX],
            "rx_mJ": self.consumed[RX],
            "remaining_mJ": self.remaining,
        }


class EnergyLedger:
    """All energy accounts of a run."""

    def __init__(
        self,
        node_count: int,
        params: EnergyParams,
        on_death: Optional[Callable[[int, float], None]] = None,
    ):
        self.params = params
        self.accounts = [EnergyAccount(node, params) for node in range(node_count)]
        self._on_death = on_death
        self._reported = set()

    def __getitem__(self, node: int) -> EnergyAccount:
        return self.accounts[node]

    def settle(self, node: int, t: float) -> EnergyAccount:
        account = self.accounts[node]
        account.settle(t)
        if not account.alive and node not in self._reported:
            self._reported.add(node)
            if self._on_death is not None:
                died_at = account.died_at if account.died_at is not None else t
                self._on_death(node, died_at)
        return account

    def alive(self, node: int, t: float) -> bool:
        return self.settle(node, t).alive

    def settle_all(self, t: float) -> None:
        for node in range(len(self.accounts)):
            self.settle(node, t)

    def snapshot(self, t: float) -> pd.DataFrame:
        self.settle_all(t)
        rows = [{"time": t, **account.snapshot()} for account in self.accounts]
        return pd.DataFrame(rows, columns=["time", *SNAPSHOT_COLUMNS])

    def final_table(self) -> pd.DataFrame:
        rows = []
        for account in self.accounts:
            row = account.snapshot()
            for mode in ENERGY_MODES + (OFF,):
                row[f"{mode}_s"] = account.durations[mode]
            row["alive"] = account.alive
            row["died_at"] = account.died_at
            rows.append(row)
        return pd.DataFrame(rows)
