"""
Unit tests for run artifacts on disk.
"""

import json

import pandas as pd
import pytest

from deerpsim.analysis.artifacts import write_run_artifacts
from deerpsim.analysis.metrics import METRIC_COLUMNS
from deerpsim.core.scenario import load_config
from deerpsim.core.simulation import run_scenario

from ...topologies import chain_positions, static_scenario


@pytest.fixture(scope="module")
def traced_run():
    config = static_scenario(
        chain_positions(3),
        "AODV",
        pairs=[(0, 2)],
        duration=10.0,
        start=1.0,
        stop=3.0,
        **{"trace.enabled": True},
    )
    return run_scenario(config)


@pytest.fixture(scope="module")
def plain_run():
    config = static_scenario(
        chain_positions(3), "DSR", pairs=[(0, 2)], duration=10.0, stop=3.0
    )
    return run_scenario(config)


class TestRunArtifacts:
    """Test the files written for one run."""

    def test_plain_run_files(self, plain_run, tmp_path):
        """Test the always-written artifacts."""
        files = write_run_artifacts(plain_run, tmp_path)

        assert set(files) == {"manifest", "metrics", "energy", "flows"}
        assert not (tmp_path / "traces").exists()

        metrics = pd.read_csv(tmp_path / "metrics.csv")
        assert list(metrics.columns) == METRIC_COLUMNS
        assert len(metrics) == 1
        assert len(pd.read_csv(tmp_path / "energy.csv")) == 3

        flows = pd.read_csv(tmp_path / "flows.csv")
        assert flows[["flow_id", "src", "dst"]].values.tolist() == [[0, 0, 2]]
        assert "pdr" in flows.columns

    def test_manifest(self, plain_run, tmp_path):
        """Test the reproduction manifest."""
        write_run_artifacts(plain_run, tmp_path)
        manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))

        assert manifest["protocol"] == "DSR"
        assert manifest["assignment"] is None
        assert manifest["config"]["node_count"] == 3
        assert set(manifest["digests"]) == {"mobility", "traffic"}
        assert manifest["summary"]["originated"] == 8
        assert manifest["events_processed"] == plain_run.summary.events_processed

    def test_manifest_reloads_as_config(self, plain_run, tmp_path):
        """Test that a manifest can seed a rerun."""
        write_run_artifacts(plain_run, tmp_path)

        config = load_config(tmp_path / "manifest.json")

        assert config.to_flat() == plain_run.config.to_flat()

    def test_traces(self, traced_run, tmp_path):
        """Test the trace files of a traced run."""
        files = write_run_artifacts(traced_run, tmp_path)

        assert {"events", "trajectories", "energy_samples", "modes"} <= set(files)
        events = tmp_path / "traces" / "events.log"
        lines = events.read_text(encoding="utf-8").splitlines()
        assert len(lines) == traced_run.summary.events_processed
        assert len(pd.read_csv(tmp_path / "traces" / "trajectories.csv")) == 11 * 3
        assert len(pd.read_csv(tmp_path / "traces" / "energy_samples.csv")) == 2 * 3

        modes = pd.read_csv(tmp_path / "traces" / "modes.csv")
        assert list(modes.columns) == ["time", "node", "mode", "end"]
        for _, segments in modes.groupby("node"):
            assert segments["time"].iloc[0] == 0.0
            assert segments["end"].iloc[-1] == 10.0
        assert "Tx" in set(modes["mode"])
