"""
Unit tests for scenario validation.
"""

import pytest

from deerpsim.core.scenario import ScenarioConfig
from deerpsim.utils.validation import validate_scenario


def issues_for(**flat):
    return validate_scenario(ScenarioConfig.from_flat(flat))


def fields_of(issues):
    return {issue.split(":", 1)[0] for issue in issues}


def flagged(**flat):
    return fields_of(issues_for(**flat))


class TestValidateScenario:
    """Test the issue list returned for bad scenarios."""

    def test_valid_scenario(self):
        """Test that defaults produce no issues."""
        assert validate_scenario(ScenarioConfig()) == []

    def test_unknown_protocol(self):
        """Test protocol names."""
        assert "protocol" in flagged(protocol="OLSR")

    def test_negative_duration(self):
        """Test run length."""
        assert "duration" in flagged(duration=-1.0)

    def test_unknown_mobility_model(self):
        """Test mobility model names."""
        assert "mobility.model" in flagged(**{"mobility.model": "MANHATTAN"})

    def test_speed_order(self):
        """Test speed_min above speed_max."""
        assert "mobility.speed_min" in flagged(**{"mobility.speed_min": 12.0})

    def test_energy_bitrate_must_match_radio(self):
        """Test the shared bitrate."""
        assert "energy.bitrate" in flagged(**{"energy.bitrate": 1e6})

    def test_single_node_with_traffic(self):
        """Test that traffic needs two nodes."""
        assert "node_count" in flagged(node_count=1)

    def test_single_node_without_traffic(self):
        """Test that a traffic-free single node is allowed."""
        assert issues_for(node_count=1, **{"traffic.flows": 0}) == []

    def test_too_many_flows(self):
        """Test the distinct-pair capacity."""
        assert "traffic.flows" in flagged(node_count=3, **{"traffic.flows": 7})

    @pytest.mark.parametrize("pair", [[1, 1], [0, 5], [0]])
    def test_bad_pairs(self, pair):
        """Test explicit pairs."""
        assert "traffic.pairs" in flagged(node_count=3, **{"traffic.pairs": [pair]})

    def test_positions(self):
        """Test explicit placement count and bounds."""
        assert "positions" in flagged(node_count=2, positions=[[0, 0]])
        assert "positions" in flagged(node_count=2, positions=[[0, 0], [700, 0]])

    def test_sleep_windows(self):
        """Test sleep window shape and range."""
        assert "sleep_windows" in flagged(sleep_windows=[[0, 5.0, 5.0]])
        assert "sleep_windows" in flagged(sleep_windows=[[99, 0.0, 5.0]])

    def test_missing_rpsc_table(self, tmp_path):
        """Test that a configured table file must exist."""
        missing = str(tmp_path / "nope.txt")
        assert "deerp.rpsc_table" in flagged(**{"deerp.rpsc_table": missing})

    def test_bad_sweep_point(self):
        """Test sweep entries."""
        assert "sweep" in flagged(sweep=[[0, 100.0, 100.0]])

    def test_every_issue_reported(self):
        """Test that validation does not stop at the first problem."""
        fields = flagged(
            duration=0.0, **{"radio.range": -5.0, "routing.buffer_capacity": 0}
        )

        assert {"duration", "radio.range", "routing.buffer_capacity"} <= fields
