"""
Tests for tightness metrics and rounding in src.sdp.
"""

import numpy as np
import pytest

from src.errors import InvalidInput, ZeroMatrix
from src.geometry import Pose, random_rotation
from src.problems import (
    build_localization_problem,
    graph_objective,
    lift_localization,
    localization_layout,
)
from src.sdp import (
    TIGHT_ER,
    KktReport,
    SdpSolution,
    SolverOptions,
    SolverStatus,
    eigenvalue_ratio,
    extract_rounded_solution,
    rank_estimate,
    relative_gap,
    solve_sdp,
    tightness_report,
)


def make_solution(z_mat, status=SolverStatus.OPTIMAL):
    n = z_mat.shape[0]
    return SdpSolution(
        z_mat=z_mat,
        multipliers=np.zeros(0),
        rho=0.0,
        certificate=np.zeros((n, n)),
        primal_cost=0.0,
        dual_cost=0.0,
        kkt=KktReport(0.0, 0.0, 0.0, 0.0),
        iterations=0,
        status=status,
    )


class TestMetrics:
    """Test eigenvalue ratio, rank and gap."""

    def test_eigenvalue_ratio(self):
        """Test λ₁/λ₂ of a diagonal matrix."""
        assert eigenvalue_ratio(np.diag([1.0, 10.0, 0.5])) == pytest.approx(10.0)

    def test_rank_one_ratio_is_capped(self, rng):
        """Test that an exact rank-one matrix gives a ratio of at least 1e16."""
        z = rng.standard_normal(5)
        assert eigenvalue_ratio(np.outer(z, z)) >= 1e15

    def test_zero_matrix(self):
        """Test that a zero matrix raises ZeroMatrix."""
        with pytest.raises(ZeroMatrix):
            eigenvalue_ratio(np.zeros((3, 3)))

    def test_rank_estimate(self):
        """Test counting eigenvalues above λ₁/1e6."""
        assert rank_estimate(np.diag([1.0, 1e-3, 1e-7, 0.0])) == 2

    def test_relative_gap(self):
        """Test (p − d)/(1 + d)."""
        assert relative_gap(3.0, 1.0) == pytest.approx(1.0)
        assert relative_gap(1.0, 1.0) == 0.0


class TestRounding:
    """Test extraction of a feasible point from Z."""

    @pytest.mark.parametrize("w", [1.0, -1.0])
    def test_rank_one_recovers_pose(self, rng, w):
        """Test that Z = zzᵀ rounds to the lifted pose for either sign of w."""
        pose = Pose(random_rotation(rng), rng.standard_normal(3))
        z = lift_localization([pose], w=w)
        estimate = extract_rounded_solution(
            make_solution(np.outer(z, z)), localization_layout(1)
        )
        np.testing.assert_allclose(estimate.poses[0].rotation, pose.rotation)
        np.testing.assert_allclose(estimate.poses[0].translation, pose.translation)
        assert estimate.landmarks is None

    def test_failed_solve(self):
        """Test that a failed solve is rejected unless allowed."""
        z = lift_localization([Pose.identity()])
        sol = make_solution(np.outer(z, z), SolverStatus.NUMERICAL_FAILURE)
        with pytest.raises(InvalidInput):
            extract_rounded_solution(sol, localization_layout(1))
        extract_rounded_solution(sol, localization_layout(1), allow_failed=True)

    def test_nonpositive_ww(self):
        """Test that Z[w, w] ≤ 0 raises InvalidInput."""
        with pytest.raises(InvalidInput):
            extract_rounded_solution(
                make_solution(np.zeros((13, 13))), localization_layout(1)
            )


class TestTightness:
    """Test tightness of a low-noise localization problem."""

    def test_noise_free_is_tight(self, noise_free_wahba):
        """Test ER ≥ 1e6, zero gap and recovery of the true pose."""
        graph, truth = noise_free_wahba
        problem = build_localization_problem(graph)
        sol = solve_sdp(problem, SolverOptions(tol=1e-9))
        estimate = extract_rounded_solution(sol, problem.layout)
        cost = graph_objective(graph, estimate.poses)
        report = tightness_report(sol, cost)
        assert report.er >= TIGHT_ER
        assert report.tight
        assert report.rank_estimate == 1
        assert abs(report.relative_gap) < 1e-6
        np.testing.assert_allclose(
            estimate.poses[0].rotation, truth.poses[0].rotation, atol=1e-5
        )
