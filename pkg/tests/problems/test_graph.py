"""
Tests for the measurement graph in src.problems.graph.
"""

import numpy as np
import pytest

from src.errors import (
    GaugeUnfixed,
    InsufficientLandmarks,
    InvalidWeight,
    MissingLandmark,
)
from src.geometry import Pose, random_rotation
from src.problems import (
    LandmarkEdge,
    MeasurementGraph,
    PriorEdge,
    RelativePoseEdge,
    check_landmark_nondegeneracy,
    graph_objective,
)


def edge(pose=0, landmark=0, weight=None):
    weight = np.eye(3) if weight is None else weight
    return LandmarkEdge(pose, landmark, np.zeros(3), weight)


class TestEdges:
    """Test edge validation."""

    def test_weight_is_symmetrized(self):
        """Test that tiny asymmetry is averaged away."""
        w = np.eye(3)
        w[0, 1] = 1e-14
        e = edge(weight=w)
        np.testing.assert_array_equal(e.weight, e.weight.T)

    @pytest.mark.parametrize(
        "weight",
        [np.diag([1.0, 1.0, -1.0]), np.ones((2, 2)), np.triu(np.ones((3, 3)))],
    )
    def test_invalid_landmark_weight(self, weight):
        """Test that indefinite, mis-shaped or asymmetric weights are rejected."""
        with pytest.raises(InvalidWeight):
            edge(weight=weight)

    @pytest.mark.parametrize("sigma,tau", [(0.0, 1.0), (1.0, -1.0)])
    def test_invalid_pose_weights(self, sigma, tau):
        """Test that non-positive σ or τ is rejected."""
        with pytest.raises(InvalidWeight):
            RelativePoseEdge(0, 1, Pose.identity(), sigma, tau)
        with pytest.raises(InvalidWeight):
            PriorEdge(0, Pose.identity(), sigma, tau)


class TestMeasurementGraph:
    """Test graph construction and lookups."""

    def test_out_of_range_indices(self):
        """Test that edges referencing missing poses or landmarks are rejected."""
        with pytest.raises(ValueError):
            MeasurementGraph(1, 2, [edge(pose=1)])
        with pytest.raises(ValueError):
            MeasurementGraph(1, 2, [edge(landmark=2)])
        with pytest.raises(ValueError):
            bad = RelativePoseEdge(0, 3, Pose.identity(), 1, 1)
            MeasurementGraph(1, 1, [edge()], relpose_edges=[bad])

    def test_missing_landmark(self):
        """Test that an unknown landmark raises MissingLandmark."""
        graph = MeasurementGraph(1, 2, [edge()], known_landmarks={0: np.zeros(3)})
        with pytest.raises(MissingLandmark):
            graph.landmark(1)

    def test_gauge(self):
        """Test that a SLAM graph without priors raises GaugeUnfixed."""
        graph = MeasurementGraph(1, 1, [edge()])
        assert graph.is_slam
        with pytest.raises(GaugeUnfixed):
            graph.require_gauge()

    def test_observed_by(self):
        """Test sorted, de-duplicated observations per pose."""
        graph = MeasurementGraph(2, 3, [edge(0, 2), edge(0, 0), edge(0, 2), edge(1, 1)])
        assert graph.observed_by(0) == [0, 2]
        assert graph.observed_by(1) == [1]
        assert len(graph.edges_of(0)) == 3


class TestObjective:
    """Test the direct factor-sum cost."""

    def test_zero_at_truth(self, noise_free_wahba):
        """Test that noise-free measurements give zero cost at the truth."""
        graph, truth = noise_free_wahba
        assert graph_objective(graph, truth.poses) == pytest.approx(0.0, abs=1e-12)

    def test_landmark_term(self):
        """Test eᵀWe for a single landmark edge."""
        w = np.diag([1.0, 4.0, 9.0])
        graph = MeasurementGraph(
            1,
            1,
            [LandmarkEdge(0, 0, np.array([1.0, 1.0, 1.0]), w)],
            known_landmarks={0: np.zeros(3)},
        )
        assert graph_objective(graph, [Pose.identity()]) == pytest.approx(14.0)

    def test_relpose_term(self, rng):
        """Test that an exact relative pose contributes zero cost."""
        a = Pose(random_rotation(rng), rng.standard_normal(3))
        b = Pose(random_rotation(rng), rng.standard_normal(3))
        e = RelativePoseEdge(0, 1, a.compose(b.inverse()), 0.1, 0.1)
        graph = MeasurementGraph(2, 0, [], relpose_edges=[e], known_landmarks={})
        assert graph_objective(graph, [a, b]) == pytest.approx(0.0, abs=1e-18)
        assert graph_objective(graph, [b, a]) > 0.0

    def test_prior_term(self, rng):
        """Test that a prior equal to the inverse pose contributes zero cost."""
        a = Pose(random_rotation(rng), rng.standard_normal(3))
        graph = MeasurementGraph(
            1, 0, [], prior_edges=[PriorEdge(0, a.inverse(), 1.0, 1.0)]
        )
        assert graph_objective(graph, [a], np.zeros((0, 3))) == pytest.approx(
            0.0, abs=1e-18
        )


class TestNondegeneracy:
    """Test the landmark rank check."""

    def test_general_position(self, rng):
        """Test full rank for random landmarks."""
        report = check_landmark_nondegeneracy(rng.standard_normal((6, 3)))
        assert report.rank == 3
        assert not report.coplanar

    def test_coplanar(self, rng):
        """Test that landmarks on a plane are flagged."""
        pts = rng.standard_normal((6, 3))
        pts[:, 2] = 1.0
        report = check_landmark_nondegeneracy(pts)
        assert report.rank == 2
        assert report.coplanar

    def test_too_few(self):
        """Test that fewer than four landmarks raise InsufficientLandmarks."""
        with pytest.raises(InsufficientLandmarks):
            check_landmark_nondegeneracy(np.eye(3))
