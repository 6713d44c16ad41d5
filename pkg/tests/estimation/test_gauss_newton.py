"""
Tests for the Gauss-Newton solvers in src.estimation.gauss_newton.
"""

from unittest.mock import patch

import numpy as np
import pytest

from src.errors import LineSearchFailure
from src.estimation import (
    GnOptions,
    closed_form_initialization,
    gauss_newton_localize,
    gauss_newton_slam,
    retract,
    slam_initialization,
)
from src.experiments import Scenario, generate_scenario
from src.geometry import Pose, TangentVector, random_rotation
from src.problems import (
    Estimate,
    build_localization_problem,
    graph_objective,
    lift_localization,
)
from src.sdp import SolverOptions, solve_sdp


def perturb(pose, rng, scale=0.1):
    return pose.retract(TangentVector.from_array(scale * rng.standard_normal(6)))


class TestLocalize:
    """Test pose-only Gauss-Newton."""

    def test_noise_free_converges_to_truth(self, noise_free_wahba, rng):
        """Test recovery of the true pose from a perturbed start."""
        graph, truth = noise_free_wahba
        result = gauss_newton_localize(graph, [perturb(truth.poses[0], rng)])
        assert result.final_cost == pytest.approx(0.0, abs=1e-8)
        np.testing.assert_allclose(
            result.poses[0].rotation, truth.poses[0].rotation, atol=1e-6
        )

    def test_cost_history_decreases(self, noisy_wahba, rng):
        """Test that accepted steps never increase the cost."""
        graph, truth = noisy_wahba
        result = gauss_newton_localize(graph, [perturb(truth.poses[0], rng)])
        assert np.all(np.diff(result.cost_history) <= 0.0)
        assert result.final_cost == pytest.approx(
            graph_objective(graph, result.poses), rel=1e-10
        )
        assert result.final_cost <= graph_objective(graph, truth.poses)

    def test_matches_sdp_optimum(self, noisy_wahba):
        """Test that a closed-form start reaches the certified optimum."""
        graph, _ = noisy_wahba
        result = gauss_newton_localize(graph, closed_form_initialization(graph))
        sol = solve_sdp(build_localization_problem(graph), SolverOptions(tol=1e-9))
        assert result.final_cost == pytest.approx(sol.dual_cost, rel=1e-5)
        assert result.grad_norm <= 1e-3 * (1.0 + result.final_cost)

    def test_two_poses(self, two_pose_graph, rng):
        """Test a coupled two-pose problem."""
        graph, truth = two_pose_graph
        init = [perturb(p, rng, 0.05) for p in truth.poses]
        result = gauss_newton_localize(graph, init)
        assert result.final_cost <= graph_objective(graph, truth.poses)
        assert result.iterations >= 1

    def test_wrong_init_length(self, noisy_wahba):
        """Test that a mismatched number of initial poses is rejected."""
        graph, _ = noisy_wahba
        with pytest.raises(ValueError):
            gauss_newton_localize(graph, [Pose.identity(), Pose.identity()])

    def test_line_search_failure(self, noisy_wahba, rng):
        """Test LineSearchFailure when every step increases the cost."""
        graph, truth = noisy_wahba

        def worse(poses, landmarks, step):
            moved = [Pose(p.rotation, p.translation + 10.0) for p in poses]
            return moved, landmarks

        with patch("src.estimation.gauss_newton.retract", side_effect=worse):
            with pytest.raises(LineSearchFailure):
                gauss_newton_localize(
                    graph,
                    [perturb(truth.poses[0], rng)],
                    GnOptions(max_rejections=2),
                )


class TestSlam:
    """Test joint pose and landmark Gauss-Newton."""

    def test_converges_below_truth_cost(self, small_slam_graph):
        """Test that SLAM from the prior-based start beats the truth cost."""
        graph, truth = small_slam_graph
        result = gauss_newton_slam(graph, slam_initialization(graph))
        truth_cost = graph_objective(graph, truth.poses, truth.landmarks)
        assert result.final_cost <= truth_cost
        assert result.landmarks.shape == (graph.n_landmarks, 3)
        assert result.estimate.landmarks is result.landmarks

    def test_needs_landmarks(self, small_slam_graph):
        """Test that an estimate without landmarks is rejected."""
        graph, truth = small_slam_graph
        with pytest.raises(ValueError):
            gauss_newton_slam(graph, Estimate(poses=truth.poses))


class TestRetract:
    """Test the stacked retraction."""

    def test_landmarks_move_additively(self, rng):
        """Test that landmark entries are added after the pose entries."""
        landmarks = rng.standard_normal((2, 3))
        delta = np.zeros(12)
        delta[6:] = 1.0
        poses, moved = retract([Pose.identity()], landmarks, delta)
        np.testing.assert_allclose(moved, landmarks + 1.0)
        np.testing.assert_array_equal(poses[0].rotation, np.eye(3))


@pytest.mark.slow
class TestLocalMinima:
    """Test Gauss-Newton from poor starts against the SDP certificate."""

    def test_certificate_rejects_local_minima(self, rng):
        """Test that far starts reach local minima the certificate rules out."""
        graph, truth = generate_scenario(
            Scenario(n_landmarks=10, noise_std=0.1, anisotropy=30.0, seed=1)
        )
        problem = build_localization_problem(graph)
        sol = solve_sdp(problem, SolverOptions(tol=1e-10))
        translation = truth.poses[0].translation
        costs = []
        for _ in range(50):
            start = Pose(random_rotation(rng), translation)
            try:
                result = gauss_newton_localize(graph, [start])
            except LineSearchFailure:
                continue
            assert result.final_cost >= sol.dual_cost - 1e-8
            if not result.converged:
                continue
            costs.append(result.final_cost)
            if result.final_cost >= 1.5 * sol.dual_cost:
                z = lift_localization(result.poses, problem.layout)
                assert z @ sol.certificate @ z == pytest.approx(
                    result.final_cost - sol.dual_cost, rel=1e-4
                )
        assert max(costs) >= 1.5 * sol.dual_cost
        assert min(costs) == pytest.approx(sol.dual_cost, rel=1e-5)
