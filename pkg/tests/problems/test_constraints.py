"""
Tests for the constraint generators in src.problems.constraints.
"""

import numpy as np
import pytest

from src.experiments import Scenario, ScenarioKind, generate_scenario
from src.geometry import Pose, random_rotation
from src.problems import (
    BASE,
    REDUNDANT,
    base_rotation_constraints,
    build_slam_problem,
    build_wahba_problem,
    homogenizing_constraint,
    lift_localization,
    lift_slam,
    localization_layout,
    redundant_rotation_constraints,
    rotation_layout,
)


def random_pose(rng):
    return Pose(random_rotation(rng), rng.standard_normal(3))


class TestRotationConstraints:
    """Test the rotation families."""

    def test_counts(self):
        """Test 9 base and 21 redundant constraints per rotation."""
        layout = rotation_layout()
        base = base_rotation_constraints(layout, 0)
        redundant = redundant_rotation_constraints(layout, 0)
        assert len(base) == 9
        assert len(redundant) == 21
        assert {c.label for c in base} == {BASE}
        assert {c.label for c in redundant} == {REDUNDANT}

    def test_families(self):
        """Test the family breakdown of the redundant set."""
        layout = rotation_layout()
        families = [c.family for c in redundant_rotation_constraints(layout, 0)]
        assert families.count("row-orthogonality") == 6
        assert families.count("cyclic-handedness") == 6
        assert families.count("norm-equality") == 9

    @pytest.mark.parametrize("w", [1.0, -1.0])
    def test_annihilate_rotations(self, rng, w):
        """Test zᵀAz = 0 on lifts of random rotations for both signs of w."""
        layout = localization_layout(2)
        poses = [random_pose(rng) for _ in range(2)]
        z = lift_localization(poses, layout, w=w)
        for i in range(2):
            for c in base_rotation_constraints(layout, i):
                assert c.evaluate(z) == pytest.approx(0.0, abs=1e-12)
            for c in redundant_rotation_constraints(layout, i):
                assert c.evaluate(z) == pytest.approx(0.0, abs=1e-12)

    def test_reflection_violates_handedness(self):
        """Test that an improper orthogonal matrix violates handedness."""
        layout = rotation_layout()
        z = lift_localization([Pose(np.diag([1.0, 1.0, -1.0]), np.zeros(3))], layout)
        residuals = {
            c.family: abs(c.evaluate(z)) for c in base_rotation_constraints(layout, 0)
        }
        assert residuals["orthogonality"] == pytest.approx(0.0)
        assert residuals["handedness"] > 0.5

    def test_matrices_symmetric(self):
        """Test that every constraint matrix is symmetric."""
        layout = rotation_layout()
        for c in redundant_rotation_constraints(layout, 0):
            dense = c.matrix.toarray()
            np.testing.assert_array_equal(dense, dense.T)

    def test_homogenizing(self):
        """Test A₀ = e_w e_wᵀ."""
        layout = localization_layout(1)
        a0 = homogenizing_constraint(layout).toarray()
        assert a0[layout.w, layout.w] == 1.0
        assert a0.sum() == 1.0


class TestProblemSizes:
    """Test constraint counts of assembled problems."""

    @pytest.mark.parametrize("redundant,count", [(False, 9), (True, 30)])
    def test_wahba(self, noisy_wahba, redundant, count):
        """Test 9 or 30 constraints on a 13-dimensional Wahba lift."""
        graph, _ = noisy_wahba
        problem = build_wahba_problem(
            graph.landmark_edges, graph.known_landmarks, redundant
        )
        assert problem.dim == 13
        assert problem.n_constraints == count
        assert problem.n_equalities == count + 1
        assert problem.metadata["kind"] == "wahba"

    def test_slam_twenty_landmarks(self):
        """Test dimension 133 and 3154 equalities for one pose."""
        scenario = Scenario(
            kind=ScenarioKind.SLAM_STEREO, n_landmarks=20, pixel_std=1.0, seed=2
        )
        graph, _ = generate_scenario(scenario)
        problem = build_slam_problem(graph, redundant=True)
        assert problem.dim == 133
        assert problem.n_constraints == 3153
        assert problem.n_equalities == 3154
        counts = problem.count_by("family")
        assert counts["substitution"] == 60
        assert counts["inner-product"] == 210
        assert counts["rotated-difference"] == 570
        assert counts["skew-commutation"] == 1710
        assert counts["translation-average"] == 3


class TestSlamConstraints:
    """Test that SLAM constraints vanish on feasible lifts."""

    def test_annihilate_random_assignment(self, small_slam_graph, rng):
        """Test every constraint on a lift of random poses and landmarks."""
        graph, _ = small_slam_graph
        problem = build_slam_problem(graph, redundant=True)
        poses = [random_pose(rng) for _ in range(graph.n_poses)]
        landmarks = rng.uniform(-1.0, 1.0, (graph.n_landmarks, 3))
        z = lift_slam(poses, landmarks, problem.layout)
        np.testing.assert_allclose(problem.residuals(z), 0.0, atol=1e-10)

    def test_inner_products_are_distinct(self, small_slam_graph):
        """Test one independent inner-product matrix per unordered landmark pair."""
        graph, _ = small_slam_graph
        problem = build_slam_problem(graph, redundant=True)
        inner = [
            c.matrix.toarray().ravel()
            for c in problem.constraints
            if c.family == "inner-product"
        ]
        assert len(inner) == 15
        assert np.linalg.matrix_rank(np.array(inner)) == 15

    def test_distance_family_on_two_poses(self, rng):
        """Test pose-pair distance equalities on a two-pose SLAM lift."""
        scenario = Scenario(
            kind=ScenarioKind.SLAM_STEREO, n_landmarks=4, n_poses=2, pixel_std=1.0
        )
        graph, _ = generate_scenario(scenario)
        problem = build_slam_problem(graph, redundant=True)
        assert problem.count_by("family")["distance"] == 6
        poses = [random_pose(rng) for _ in range(2)]
        landmarks = rng.standard_normal((4, 3))
        z = lift_slam(poses, landmarks, problem.layout, w=-1.0)
        np.testing.assert_allclose(problem.residuals(z), 0.0, atol=1e-10)

    def test_substitution_detects_inconsistency(self, small_slam_graph, rng):
        """Test that a perturbed substitution block violates its constraint."""
        graph, truth = small_slam_graph
        problem = build_slam_problem(graph)
        z = lift_slam(truth.poses, truth.landmarks, problem.layout)
        z[problem.layout.substitution(0, 0)] += 0.1
        assert np.max(np.abs(problem.residuals(z))) == pytest.approx(0.1)
