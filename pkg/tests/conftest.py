"""
Pytest configuration and shared fixtures for deerpsim tests.
"""

import os
import shutil
import tempfile
from pathlib import Path

import pytest
from click.testing import CliRunner

# Set test environment
os.environ["ENVIRONMENT"] = "testing"
os.environ["LOG_LEVEL"] = "WARNING"

# Import after setting environment
from deerpsim.core.scenario import ScenarioConfig  # noqa: E402

from .topologies import chain_positions, mesh_positions  # noqa: E402


@pytest.fixture(scope="session")
def temp_dir():
    """Create a temporary directory for test files."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture
def chain():
    """Three nodes A-B-C in a line."""
    return chain_positions(3)


@pytest.fixture
def full_mesh():
    """Five nodes all within range of each other."""
    return mesh_positions(5)


@pytest.fixture
def small_rwp() -> ScenarioConfig:
    """Short mobile scenario for determinism and artifact tests."""
    return ScenarioConfig.from_flat(
        {
            "protocol": "AODV",
            "node_count": 8,
            "duration": 40.0,
            "mobility.model": "RWP",
            "mobility.width": 500.0,
            "mobility.height": 500.0,
            "traffic.flows": 2,
            "traffic.start": 5.0,
        }
    )


@pytest.fixture
def cli_runner():
    return CliRunner()


@pytest.fixture
def rpsc_file(tmp_path) -> Path:
    """A two-row selection table on disk, mixing separators."""
    path = tmp_path / "rpsc.txt"
    path.write_text(
        "# mobility nodes_min nodes_max speed_min speed_max idle tx rx\n"
        "RWP 5 25 1 10 DSR DSDV DSR\n"
        "RPGM, 20, 80, 0.5, 5, DSDV, DSDV, DSR\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture(autouse=True)
def cleanup_logs():
    """Automatically clean up test logs."""
    yield
    log_files = ["deerpsim.log", "deerpsim_errors.log"]
    for log_file in log_files:
        if Path(log_file).exists():
            Path(log_file).unlink()


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "slow: marks tests as slow")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


def pytest_collection_modifyitems(config, items):
    """Automatically mark tests based on their location."""
    for item in items:
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)

        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)


# Performance testing utilities
@pytest.fixture
def performance_timer():
    """Timer utility for performance testing."""
    import time

    class Timer:
        def __init__(self):
            self.start_time = None
            self.end_time = None

        def start(self):
            self.start_time = time.time()

        def stop(self):
            self.end_time = time.time()

        @property
        def elapsed(self):
            if self.start_time and self.end_time:
                return self.end_time - self.start_time
            return None

    return Timer()
