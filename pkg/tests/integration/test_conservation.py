"""
Integration tests for run-wide bookkeeping: every millijoule and every
second of every node is accounted for, and every packet ends with one fate.
"""

import pytest

from deerpsim.core.energy import ENERGY_MODES, OFF
from deerpsim.core.models import DropCause
from deerpsim.core.scenario import ScenarioConfig
from deerpsim.core.simulation import run_scenario
from deerpsim.utils.metrics import sum_counters

from ..topologies import chain_positions, static_scenario

FATES = ["delivered", "buffered"] + [cause.value for cause in DropCause]


def mobile(protocol, **overrides):
    flat = {
        "protocol": protocol,
        "node_count": 12,
        "duration": 80.0,
        "mobility.model": "RWP",
        "mobility.width": 700.0,
        "mobility.height": 700.0,
        "traffic.flows": 4,
        "traffic.start": 5.0,
    }
    flat.update(overrides)
    return ScenarioConfig.from_flat(flat)


def assert_energy_balanced(result):
    table = result.energy
    consumed = sum(table[f"{mode}_mJ"] for mode in ENERGY_MODES)
    durations = sum(table[f"{mode}_s"] for mode in ENERGY_MODES + (OFF,))

    initial = result.config.energy.initial_energy
    total = (table["remaining_mJ"] + consumed).tolist()
    assert total == pytest.approx([initial] * len(table), rel=1e-9)
    assert durations.tolist() == pytest.approx([result.duration] * len(table), rel=1e-9)
    assert (table["remaining_mJ"] >= 0).all()


def assert_fates_complete(result):
    ledger = result.ledger
    assert all(record.fate in FATES for record in ledger.records.values())
    assert sum(ledger.count(fate) for fate in FATES) == ledger.originated


def assert_frames_conserved(result):
    counters = result.counters
    settled = (
        counters.get("frames_transmitted", 0)
        + sum_counters(counters, "frames_dropped")
        + counters["frames_queued_at_end"]
    )
    assert counters["frames_enqueued"] == settled


@pytest.mark.parametrize("protocol", ["DSR", "DSDV", "AODV", "DEERP"])
class TestMobileRun:
    """Test bookkeeping on a mobile network with traffic."""

    def test_energy_balanced(self, protocol):
        """Test initial energy against remaining plus consumption."""
        assert_energy_balanced(run_scenario(mobile(protocol)))

    def test_fates_complete(self, protocol):
        """Test that every originated packet has exactly one fate."""
        result = run_scenario(mobile(protocol))

        assert result.ledger.originated > 0
        assert_fates_complete(result)

    def test_frames_conserved(self, protocol):
        """Test that every enqueued frame was sent, dropped or is still queued."""
        assert_frames_conserved(run_scenario(mobile(protocol)))


class TestDepletion:
    """Test bookkeeping when nodes run out of energy mid-run."""

    @pytest.fixture
    def depleted(self):
        config = static_scenario(
            chain_positions(4),
            "AODV",
            pairs=[(0, 3)],
            duration=30.0,
            start=1.0,
            rate=8.0,
            **{"energy.initial_energy": 2000.0},
        )
        return run_scenario(config)

    def test_everyone_dies(self, depleted):
        """Test that idle listening alone drains the budget before the end."""
        table = depleted.energy

        assert not table["alive"].any()
        assert (table["died_at"] < 2000.0 / 230.0 + 1e-9).all()
        assert len(depleted.deaths) == 4

    def test_off_time_closes_partition(self, depleted):
        """Test that time after death is counted as off."""
        table = depleted.energy

        assert (table["off_s"] > 0).all()
        assert_energy_balanced(depleted)

    def test_dead_source_drops(self, depleted):
        """Test that packets originated at a dead source are energy drops."""
        assert depleted.ledger.count(DropCause.ENERGY.value) > 0
        assert_fates_complete(depleted)
        assert_frames_conserved(depleted)


class TestSleepingNode:
    """Test bookkeeping across a sleep window."""

    def test_sleep_time_counted(self):
        """Test that a scheduled sleep window shows up in the partition."""
        config = static_scenario(
            chain_positions(3),
            "DSDV",
            duration=40.0,
            sleep_windows=[[1, 10.0, 20.0]],
            **{"energy.sleep_power": 10.0},
        )
        result = run_scenario(config)
        row = result.energy.set_index("node").loc[1]

        assert row["sleep_s"] == pytest.approx(10.0)
        assert row["sleep_mJ"] == pytest.approx(100.0)
        assert_energy_balanced(result)
