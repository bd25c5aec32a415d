"""
Unit tests for mobility models.
"""

import numpy as np
import pytest

from deerpsim.core.mobility import (
    MobilityConfig,
    MobilityManager,
    RandomWaypoint,
    Trajectory,
    group_of,
)
from deerpsim.core.rng import MOBILITY, RngStream


def rwp_config(**kwargs) -> MobilityConfig:
    params = dict(
        model="RWP", width=600.0, height=400.0, speed_min=1.0, speed_max=10.0, pause=0.0
    )
    params.update(kwargs)
    return MobilityConfig(**params)


class TestTrajectory:
    """Test piecewise-linear paths."""

    def test_interpolation(self):
        """Test positions between breakpoints."""
        path = Trajectory([0.0, 10.0], [0.0, 100.0], [0.0, 0.0])

        assert path.position_at(5.0).x == pytest.approx(50.0)
        assert path.position_at(20.0).x == pytest.approx(100.0)

    def test_bounds_clamp(self):
        """Test that bounded paths stay inside the area."""
        path = Trajectory([0.0, 1.0], [-10.0, 700.0], [5.0, 5.0], bounds=(600.0, 400.0))

        assert path.position_at(0.0).x == 0.0
        assert path.position_at(1.0).x == 600.0


class TestStatic:
    """Test fixed placement."""

    def test_positions_never_change(self):
        """Test that STATIC nodes stay where they were put."""
        positions = [[10.0, 20.0], [30.0, 40.0]]
        manager = MobilityManager(
            MobilityConfig(model="STATIC"), 2, 1, 100.0, positions=positions
        )

        for t in (0.0, 50.0, 100.0):
            assert manager.positions_at(t).tolist() == positions

    def test_random_placement_inside_area(self):
        """Test STATIC without explicit positions."""
        manager = MobilityManager(rwp_config(model="STATIC"), 10, 4, 50.0)
        coords = manager.positions_at(0.0)

        assert (coords[:, 0] <= 600.0).all() and (coords[:, 1] <= 400.0).all()
        assert (coords >= 0.0).all()


class TestRandomWaypoint:
    """Test the Random Waypoint model."""

    def test_stays_inside_area(self):
        """Test that waypoints keep nodes in the terrain."""
        manager = MobilityManager(rwp_config(), 8, 3, 200.0)

        for t in np.linspace(0.0, 200.0, 41):
            coords = manager.positions_at(float(t))
            assert (coords[:, 0] >= 0.0).all() and (coords[:, 0] <= 600.0).all()
            assert (coords[:, 1] >= 0.0).all() and (coords[:, 1] <= 400.0).all()

    def test_leg_speeds_within_range(self):
        """Test that every leg moves at a speed in [speed_min, speed_max]."""
        manager = MobilityManager(rwp_config(speed_min=2.0, speed_max=5.0), 4, 9, 300.0)

        for path in manager.trajectories:
            dt = np.diff(path.times)
            dist = np.hypot(np.diff(path.xs), np.diff(path.ys))
            speeds = dist / dt
            assert (speeds >= 2.0 - 1e-9).all()
            assert (speeds <= 5.0 + 1e-9).all()

    def test_pause_holds_position(self):
        """Test that a node waits at each waypoint."""
        manager = MobilityManager(rwp_config(pause=10.0), 1, 2, 500.0)
        path = manager.trajectories[0]

        # Breakpoints alternate arrival and departure from the same spot
        assert path.xs[1] == path.xs[0] and path.ys[1] == path.ys[0]
        assert path.times[1] == pytest.approx(10.0)

    def test_covers_horizon(self):
        """Test that trajectories extend past the run duration."""
        manager = MobilityManager(rwp_config(), 5, 1, 123.0)

        assert all(path.end_time >= 123.0 for path in manager.trajectories)

    def test_same_seed_same_paths(self):
        """Test reproducibility and the mobility digest."""
        a = MobilityManager(rwp_config(), 6, 11, 100.0)
        b = MobilityManager(rwp_config(), 6, 11, 100.0)
        c = MobilityManager(rwp_config(), 6, 12, 100.0)

        assert np.array_equal(a.positions_at(42.0), b.positions_at(42.0))
        assert a.digest() == b.digest()
        assert a.digest() != c.digest()

    def test_node_paths_independent_of_node_count(self):
        """Test that each node draws from its own substream."""
        small = MobilityManager(rwp_config(), 3, 5, 100.0)
        large = MobilityManager(rwp_config(), 6, 5, 100.0)

        assert np.array_equal(small.positions_at(30.0), large.positions_at(30.0)[:3])

    def test_sample_table(self):
        """Test the trajectory dump."""
        manager = MobilityManager(rwp_config(), 2, 1, 10.0)
        table = manager.sample(1.0)

        assert list(table.columns) == ["time", "node", "x", "y"]
        assert len(table) == 11 * 2

    def test_next_leg_statistics(self):
        """Test 10,000 legs: targets inside the area, uniform speeds, no pause."""
        model = RandomWaypoint(rwp_config(width=600.0, height=600.0))
        stream = RngStream(5, MOBILITY, 0)
        legs = [model.next_leg(float(k), stream) for k in range(10_000)]

        speeds = np.array([leg.speed for leg in legs])
        xs = np.array([leg.target.x for leg in legs])
        ys = np.array([leg.target.y for leg in legs])
        assert speeds.min() >= 1.0 and speeds.max() <= 10.0
        assert speeds.mean() == pytest.approx(5.5, abs=0.2)
        assert (xs >= 0.0).all() and (xs <= 600.0).all()
        assert (ys >= 0.0).all() and (ys <= 600.0).all()
        assert all(leg.depart_at == float(k) for k, leg in enumerate(legs))


class TestRpgm:
    """Test Reference Point Group Mobility."""

    def config(self) -> MobilityConfig:
        return rwp_config(
            model="RPGM",
            width=500.0,
            height=500.0,
            speed_min=0.5,
            speed_max=5.0,
            rpgm_groups=2,
        )

    def test_groups_are_contiguous(self):
        """Test group membership by node id blocks."""
        assert [group_of(n, 8, 2) for n in range(8)] == [0, 0, 0, 0, 1, 1, 1, 1]

    def test_leaders(self):
        """Test that the first node of each block leads it."""
        manager = MobilityManager(self.config(), 8, 1, 100.0)

        assert manager.leaders == {0: 0, 1: 4}
        assert manager.leader_of(6) == 4
        assert manager.leader_of(0) == 0

    def test_members_stay_near_leader(self):
        """Test that members never stray beyond the group radius."""
        manager = MobilityManager(self.config(), 8, 7, 200.0)

        for t in np.linspace(0.0, 200.0, 51):
            coords = manager.positions_at(float(t))
            for member in range(8):
                leader = manager.leader_of(member)
                gap = np.hypot(*(coords[member] - coords[leader]))
                assert gap <= 50.0 + 1e-9

    def test_members_inside_area(self):
        """Test that members are clamped to the terrain."""
        manager = MobilityManager(self.config(), 8, 3, 200.0)

        for t in np.linspace(0.0, 200.0, 51):
            coords = manager.positions_at(float(t))
            assert (coords >= 0.0).all() and (coords <= 500.0).all()

    def test_member_leg_speeds_within_range(self):
        """Test that deviations never push a member outside the speed range."""
        manager = MobilityManager(self.config(), 8, 7, 300.0)

        for member, path in enumerate(manager.trajectories):
            if manager.leader_of(member) == member:
                continue
            speeds = np.hypot(np.diff(path.xs), np.diff(path.ys)) / np.diff(path.times)
            assert (speeds >= 0.5 - 1e-9).all(), member
            assert (speeds <= 5.0 + 1e-9).all(), member

    def test_zero_radius_follows_leader(self):
        """Test that members without deviation sit on their leader."""
        config = rwp_config(
            model="RPGM", width=500.0, height=500.0, rpgm_groups=2, rpgm_radius=0.0
        )
        manager = MobilityManager(config, 6, 4, 100.0)

        for t in np.linspace(0.0, 100.0, 101):
            coords = manager.positions_at(float(t))
            for member in range(6):
                leader = manager.leader_of(member)
                assert coords[member].tolist() == coords[leader].tolist()
