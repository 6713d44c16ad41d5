"""
Tests for QCQP assembly in src.problems.builders and src.problems.costs.
"""

import numpy as np
import pytest

from src.errors import GaugeUnfixed, MissingLandmark
from src.geometry import Pose, random_rotation
from src.problems import (
    LandmarkEdge,
    MeasurementGraph,
    PriorEdge,
    build_localization_problem,
    build_prior_cost,
    build_relpose_cost,
    build_slam_problem,
    build_wahba_cost,
    build_wahba_problem,
    graph_objective,
    lift_localization,
    lift_slam,
    localization_layout,
    split_wahba_subproblems,
    unique_edges,
)


def random_pose(rng):
    return Pose(random_rotation(rng), rng.standard_normal(3))


class TestCostEquivalence:
    """Test zᵀQz against the direct factor-sum cost."""

    @pytest.mark.parametrize("w", [1.0, -1.0])
    def test_wahba(self, noisy_wahba, rng, w):
        """Test the Wahba cost at an arbitrary pose and both signs of w."""
        graph, _ = noisy_wahba
        q = build_wahba_cost(graph.landmark_edges, graph.known_landmarks)
        pose = random_pose(rng)
        z = lift_localization([pose], w=w)
        assert z @ q @ z == pytest.approx(graph_objective(graph, [pose]), rel=1e-10)

    def test_localization_with_relpose(self, two_pose_graph, rng):
        """Test the multi-pose localization cost including relative poses."""
        graph, _ = two_pose_graph
        problem = build_localization_problem(graph)
        poses = [random_pose(rng) for _ in range(2)]
        z = lift_localization(poses, problem.layout)
        assert problem.cost(z) == pytest.approx(
            graph_objective(graph, poses), rel=1e-10
        )

    def test_slam(self, small_slam_graph, rng):
        """Test the SLAM cost on a lift of random poses and landmarks."""
        graph, _ = small_slam_graph
        problem = build_slam_problem(graph)
        poses = [random_pose(rng)]
        landmarks = rng.standard_normal((graph.n_landmarks, 3))
        z = lift_slam(poses, landmarks, problem.layout)
        assert problem.cost(z) == pytest.approx(
            graph_objective(graph, poses, landmarks), rel=1e-10
        )

    def test_edge_costs_are_psd(self, two_pose_graph):
        """Test that relative-pose contributions are positive semidefinite."""
        graph, _ = two_pose_graph
        layout = localization_layout(2)
        q = build_relpose_cost(graph.relpose_edges[0], layout)
        assert np.linalg.eigvalsh(q).min() > -1e-8 * np.abs(q).max()

    def test_prior_cost_vanishes_at_truth(self, small_slam_graph):
        """Test that an exact prior gives zero cost at its pose."""
        graph, truth = small_slam_graph
        layout = localization_layout(1)
        exact = PriorEdge(0, truth.poses[0].inverse(), 1.0, 1.0)
        z = lift_localization(truth.poses, layout)
        assert z @ build_prior_cost(exact, layout) @ z == pytest.approx(0.0, abs=1e-20)


class TestBuilders:
    """Test the problem builders."""

    def test_missing_landmark(self):
        """Test that an edge to an unknown landmark raises MissingLandmark."""
        edges = [LandmarkEdge(0, 3, np.zeros(3), np.eye(3))]
        with pytest.raises(MissingLandmark):
            build_wahba_problem(edges, {0: np.zeros(3)})

    def test_slam_needs_prior(self, small_slam_graph):
        """Test that a SLAM graph without priors raises GaugeUnfixed."""
        graph, _ = small_slam_graph
        unfixed = MeasurementGraph(
            graph.n_poses, graph.n_landmarks, graph.landmark_edges
        )
        with pytest.raises(GaugeUnfixed):
            build_slam_problem(unfixed)

    def test_localization_matches_wahba(self, noisy_wahba):
        """Test that one-pose localization equals the Wahba problem."""
        graph, _ = noisy_wahba
        a = build_localization_problem(graph, redundant=True)
        b = build_wahba_problem(graph.landmark_edges, graph.known_landmarks, True)
        np.testing.assert_allclose(a.q, b.q, rtol=1e-12, atol=1e-12)
        assert a.n_constraints == b.n_constraints

    def test_split_subproblems(self, two_pose_graph):
        """Test per-pose splitting and its rejection of coupled graphs."""
        graph, _ = two_pose_graph
        with pytest.raises(ValueError):
            split_wahba_subproblems(graph)
        uncoupled = MeasurementGraph(
            graph.n_poses,
            graph.n_landmarks,
            graph.landmark_edges,
            known_landmarks=graph.known_landmarks,
        )
        parts = split_wahba_subproblems(uncoupled)
        assert len(parts) == 2
        assert all(p.dim == 13 for p in parts)

    def test_unique_edges(self):
        """Test order-preserving de-duplication of observation pairs."""
        edges = [
            LandmarkEdge(p, k, np.zeros(3), np.eye(3))
            for p, k in [(0, 1), (0, 0), (0, 1), (1, 0)]
        ]
        graph = MeasurementGraph(2, 2, edges)
        assert unique_edges(graph) == [(0, 1), (0, 0), (1, 0)]

    def test_without_redundant(self, noisy_wahba):
        """Test that dropping redundant constraints leaves the base set."""
        graph, _ = noisy_wahba
        problem = build_wahba_problem(graph.landmark_edges, graph.known_landmarks, True)
        assert problem.without_redundant().n_constraints == 9
