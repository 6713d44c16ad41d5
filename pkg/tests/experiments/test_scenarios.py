"""
Tests for scenario generation in src.experiments.scenarios.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.camera import anisotropicity, project, propagate_covariance
from src.experiments import (
    NoiseConvention,
    Scenario,
    ScenarioKind,
    generate_scenario,
    viewing_pose,
)


def covariances(graph):
    return [np.linalg.inv(e.weight) for e in graph.landmark_edges]


def major_axis(cov):
    _, vectors = np.linalg.eigh(cov)
    return vectors[:, -1]


class TestScenarioModel:
    """Test parameter validation and derived values."""

    @pytest.mark.parametrize(
        "field,value",
        [("anisotropy", 0.5), ("noise_std", 0.0), ("n_landmarks", 0), ("colour", 1)],
    )
    def test_rejects_invalid(self, field, value):
        """Test that out-of-range or unknown fields fail validation."""
        with pytest.raises(ValidationError):
            Scenario(**{field: value})

    @pytest.mark.parametrize(
        "convention,minor",
        [
            (NoiseConvention.MINOR, 1.0),
            (NoiseConvention.MAJOR, 0.125),
            (NoiseConvention.GEOMETRIC, 0.5),
        ],
    )
    def test_axis_stds(self, convention, minor):
        """Test the three readings of noise_std."""
        s = Scenario(noise_std=1.0, anisotropy=8.0, noise_convention=convention)
        got_minor, got_major = s.axis_stds()
        assert got_minor == pytest.approx(minor)
        assert got_major == pytest.approx(8.0 * minor)

    @pytest.mark.parametrize(
        "kind,n_poses,expected",
        [
            (ScenarioKind.ALIGNED, 3, 1),
            (ScenarioKind.TWO_POSE, 3, 2),
            (ScenarioKind.SLAM_STEREO, 3, 3),
        ],
    )
    def test_pose_count(self, kind, n_poses, expected):
        """Test the number of poses per scenario kind."""
        assert Scenario(kind=kind, n_poses=n_poses).pose_count() == expected

    def test_pixel_std_override(self):
        """Test that pixel_std sets both camera pixel stds."""
        cam = Scenario(kind=ScenarioKind.STEREO, pixel_std=2.5).camera()
        assert cam.sigma_u == cam.sigma_v == 2.5


class TestViewingPose:
    """Test camera placement."""

    def test_origin_on_optical_axis(self, rng):
        """Test that the origin appears at depth `distance` on the z axis."""
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        pose = viewing_pose(d, 0.7, 3.0)
        np.testing.assert_allclose(pose.apply(np.zeros(3)), [0.0, 0.0, 3.0], atol=1e-12)


class TestCovarianceModels:
    """Test the measurement weights of each ellipsoid model."""

    def test_isotropic_when_a_is_one(self):
        """Test W = I/σ² for a = 1."""
        graph, _ = generate_scenario(Scenario(noise_std=0.2, anisotropy=1.0))
        for e in graph.landmark_edges:
            np.testing.assert_allclose(e.weight, np.eye(3) / 0.04, rtol=1e-10)

    def test_aligned_anisotropy(self):
        """Test that aligned ellipsoids have anisotropicity a along z."""
        graph, _ = generate_scenario(Scenario(anisotropy=7.0))
        for cov in covariances(graph):
            assert anisotropicity(cov) == pytest.approx(7.0)
            assert abs(major_axis(cov)[2]) == pytest.approx(1.0)

    def test_ray_aligned(self):
        """Test that the major axis points along the landmark ray."""
        scenario = Scenario(
            kind=ScenarioKind.RAY_ALIGNED, anisotropy=5.0, add_noise=False
        )
        graph, _ = generate_scenario(scenario)
        for e, cov in zip(graph.landmark_edges, covariances(graph)):
            ray = e.measurement / np.linalg.norm(e.measurement)
            assert abs(major_axis(cov) @ ray) == pytest.approx(1.0)

    def test_perturbed_tilts_major_axis(self):
        """Test that perturbed ellipsoids are not all aligned with z."""
        scenario = Scenario(
            kind=ScenarioKind.PERTURBED, anisotropy=5.0, perturbation_std=0.3
        )
        graph, _ = generate_scenario(scenario)
        tilts = [abs(major_axis(c)[2]) for c in covariances(graph)]
        assert min(tilts) < 0.999
        for cov in covariances(graph):
            assert anisotropicity(cov) == pytest.approx(5.0)

    def test_stereo_weight_from_measured_pixel(self):
        """Test that stereo weights are linearized about the noisy pixel."""
        scenario = Scenario(kind=ScenarioKind.STEREO, pixel_std=2.0, seed=6)
        cam = scenario.camera()
        graph, _ = generate_scenario(scenario)
        for e in graph.landmark_edges:
            expected = propagate_covariance(cam, project(cam, e.measurement))
            np.testing.assert_allclose(e.weight, expected.weight, rtol=1e-6)

    def test_stereo_weight_follows_noise_stream(self):
        """Test that a different noise draw changes the stereo weights."""
        scenario = Scenario(kind=ScenarioKind.STEREO, pixel_std=2.0, seed=6)
        a, _ = generate_scenario(scenario, np.random.default_rng(1))
        b, _ = generate_scenario(scenario, np.random.default_rng(2))
        assert not np.allclose(a.landmark_edges[0].weight, b.landmark_edges[0].weight)

    def test_stereo_points_in_front(self):
        """Test that stereo landmarks have positive depth in every pose."""
        graph, truth = generate_scenario(
            Scenario(kind=ScenarioKind.TWO_POSE, pixel_std=1.0)
        )
        for e in graph.landmark_edges:
            assert truth.poses[e.pose].apply(truth.landmarks[e.landmark])[2] > 0


class TestGeneration:
    """Test graph structure and determinism."""

    def test_same_seed_same_graph(self):
        """Test that a seed fully determines the graph."""
        a, _ = generate_scenario(Scenario(seed=9))
        b, _ = generate_scenario(Scenario(seed=9))
        for ea, eb in zip(a.landmark_edges, b.landmark_edges):
            np.testing.assert_array_equal(ea.measurement, eb.measurement)

    def test_noise_stream_keeps_geometry(self):
        """Test that a separate noise source changes only the measurements."""
        scenario = Scenario(seed=4)
        a, truth_a = generate_scenario(scenario, np.random.default_rng(1))
        b, truth_b = generate_scenario(scenario, np.random.default_rng(2))
        np.testing.assert_array_equal(truth_a.landmarks, truth_b.landmarks)
        assert not np.allclose(
            a.landmark_edges[0].measurement, b.landmark_edges[0].measurement
        )

    def test_two_pose_angle(self):
        """Test the angle between camera centers about the cube center."""
        graph, truth = generate_scenario(
            Scenario(kind=ScenarioKind.TWO_POSE, pose_angle=40.0, pixel_std=1.0)
        )
        centers = [p.rotation.T @ p.translation for p in truth.poses]
        cos = centers[0] @ centers[1] / np.prod([np.linalg.norm(c) for c in centers])
        assert np.degrees(np.arccos(cos)) == pytest.approx(40.0)
        assert len(graph.relpose_edges) == 1
        assert len(graph.landmark_edges) == 2 * graph.n_landmarks

    def test_slam_structure(self, small_slam_graph):
        """Test a SLAM graph with one prior and unknown landmarks."""
        graph, truth = small_slam_graph
        assert graph.is_slam
        assert len(graph.prior_edges) == 1
        assert truth.estimate.landmarks.shape == (5, 3)
