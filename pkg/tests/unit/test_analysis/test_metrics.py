"""
Unit tests for per-run metrics.
"""

import math

import pytest

from deerpsim.analysis.metrics import METRIC_COLUMNS, aggregate
from deerpsim.core.simulation import run_scenario

from ...topologies import chain_positions, mesh_positions, static_scenario


@pytest.fixture(scope="module")
def quiet_run():
    """Traffic-free DSDV chain."""
    return run_scenario(static_scenario(chain_positions(3), "DSDV", duration=30.0))


@pytest.fixture(scope="module")
def delivered_run():
    """Four packets over a single AODV hop."""
    config = static_scenario(
        mesh_positions(2), "AODV", pairs=[(0, 1)], duration=5.0, start=1.0, stop=2.0
    )
    return run_scenario(config)


class TestAggregate:
    """Test reducing a run to its metrics."""

    def test_no_traffic(self, quiet_run):
        """Test the ratios of a run that originated nothing."""
        m = aggregate(quiet_run)

        assert m.originated == 0 and m.delivered == 0
        assert m.pdr == 0.0
        assert m.throughput == 0.0
        assert math.isnan(m.mean_delay)
        assert math.isnan(m.mean_hops)
        assert math.isnan(m.routing_overhead)
        assert math.isnan(m.nrl_bytes)
        assert m.control_frames > 0

    def test_energy_means(self, quiet_run):
        """Test network-average energy per mode."""
        m = aggregate(quiet_run)
        energy = quiet_run.energy

        assert m.energy_idle == pytest.approx(energy["idle_mJ"].mean())
        assert m.energy_tx == pytest.approx(energy["tx_mJ"].mean())
        assert m.energy_sleep == 0.0
        spent = m.energy_idle + m.energy_tx + m.energy_rx + m.energy_sleep
        assert m.remaining == pytest.approx(1_000_000.0 - spent)
        assert spent == pytest.approx(230.0 * 30.0, rel=0.01)

    def test_delivery_metrics(self, delivered_run):
        """Test delivery, delay, hops and overhead on a clean link."""
        m = aggregate(delivered_run)

        assert (m.originated, m.delivered) == (4, 4)
        assert m.pdr == 1.0
        assert m.mean_hops == 1.0
        assert m.mean_delay > 0.0
        assert m.throughput == pytest.approx(4 * 512 * 8 / 5.0)
        assert m.routing_overhead == pytest.approx(m.control_frames / 4)
        assert m.nrl_bytes == pytest.approx(m.control_bytes / (4 * 512))
        assert m.flow_pdr == {0: 1.0}
        assert m.dropped == 0

    def test_row_layout(self, delivered_run):
        """Test the flat row follows the column order."""
        m = aggregate(delivered_run)
        row = m.to_row()

        assert list(row) == METRIC_COLUMNS
        assert row["protocol"] == "AODV"
        assert row["drop_no_route"] == 0
        assert row["drop_in_flight_at_end"] == 0
        assert row["first_death"] is None

    def test_frame(self, delivered_run):
        """Test the one-row table written as metrics.csv."""
        table = aggregate(delivered_run).to_frame()

        assert list(table.columns) == METRIC_COLUMNS
        assert table["protocol"].tolist() == ["AODV"]
        assert table["pdr"].tolist() == [1.0]

    def test_drops_counted_by_cause(self):
        """Test packets towards a partitioned destination."""
        positions = chain_positions(2, spacing=600.0)
        config = static_scenario(
            positions,
            "DSR",
            pairs=[(0, 1)],
            duration=10.0,
            start=1.0,
            stop=1.5,
            rate=4.0,
        )

        m = aggregate(run_scenario(config))

        assert m.originated == 2
        assert m.drops["no-route"] == 2
        assert m.to_row()["drop_no_route"] == 2
        assert m.pdr == 0.0
        assert m.flow_pdr == {0: 0.0}
