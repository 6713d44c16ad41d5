"""
Simulated measurement graphs.

Landmarks are drawn uniformly in a cube centered on the world origin and
every pose looks at the cube center from `distance` meters along its own
z axis. Measurement covariances are built per scenario kind in the pose
frame and measurements are sampled from exactly that covariance.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.camera import StereoCamera, project, propagate_covariance, sample_pixel_noise
from src.geometry import Pose, exp_so3, rotation_between
from src.linalg import FloatArray, cholesky, symmetrize
from src.problems import (
    Estimate,
    LandmarkEdge,
    MeasurementGraph,
    PriorEdge,
    RelativePoseEdge,
)

log = logging.getLogger(__name__)

Z_AXIS = np.array([0.0, 0.0, 1.0])


class ScenarioKind(str, Enum):
    ALIGNED = "aligned-ellipsoid"
    PERTURBED = "perturbed-ellipsoid"
    RAY_ALIGNED = "ray-aligned"
    STEREO = "stereo"
    TWO_POSE = "two-pose-angle"
    SLAM_STEREO = "slam-stereo"


class NoiseConvention(str, Enum):
    """Which standard deviation of an ellipsoid `noise_std` refers to."""

    MINOR = "minor"
    MAJOR = "major"
    GEOMETRIC = "geometric"


STEREO_KINDS = (ScenarioKind.STEREO, ScenarioKind.TWO_POSE, ScenarioKind.SLAM_STEREO)


class Scenario(BaseModel):
    """
    Simulation parameters.

    Args:
        kind (ScenarioKind): Covariance model and graph structure.
        n_landmarks (int): Landmarks in the cube.
        distance (float): Distance from each pose to the cube center (m).
        cube_size (float): Side length of the landmark cube (m).
        noise_std (float): Ellipsoid standard deviation (m), read per
            noise_convention.
        anisotropy (float): Ratio of major to minor axis std, a ≥ 1.
        perturbation_std (float): Std of the random tilt of the major axis
            (rad, perturbed kind).
        pose_angle (float): Angle between consecutive viewpoints about the
            cube center (deg).
        relpose_noise (float): Std of relative-pose and prior noise, used in
            radians and meters alike; also sets their weights.
        seed (int): Geometry seed.
        noise_convention (NoiseConvention): Minor-axis, major-axis or
            geometric-mean reading of noise_std.
        pixel_std (float, optional): Overrides both camera pixel stds.
        add_noise (bool): Sample measurement noise.
        n_poses (int): Poses of the slam-stereo kind.
    """

    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    kind: ScenarioKind = ScenarioKind.ALIGNED
    n_landmarks: int = Field(10, ge=1)
    distance: float = Field(3.0, gt=0)
    cube_size: float = Field(1.0, gt=0)
    noise_std: float = Field(0.1, gt=0)
    anisotropy: float = Field(1.0, ge=1.0)
    perturbation_std: float = Field(0.1, ge=0)
    pose_angle: float = 30.0
    relpose_noise: float = Field(0.01, gt=0)
    seed: int = 0
    noise_convention: NoiseConvention = NoiseConvention.MINOR
    pixel_std: Optional[float] = Field(None, gt=0)
    add_noise: bool = True
    n_poses: int = Field(1, ge=1)

    def axis_stds(self) -> Tuple[float, float]:
        """(minor, major) standard deviations of an ellipsoid."""
        a = self.anisotropy
        convention = NoiseConvention(self.noise_convention)
        if convention == NoiseConvention.MAJOR:
            minor = self.noise_std / a
        elif convention == NoiseConvention.GEOMETRIC:
            minor = self.noise_std / a ** (1.0 / 3.0)
        else:
            minor = self.noise_std
        return minor, a * minor

    def camera(self) -> StereoCamera:
        cam = StereoCamera()
        return cam if self.pixel_std is None else cam.with_pixel_std(self.pixel_std)

    def pose_count(self) -> int:
        kind = ScenarioKind(self.kind)
        if kind == ScenarioKind.TWO_POSE:
            return 2
        if kind == ScenarioKind.SLAM_STEREO:
            return self.n_poses
        return 1


@dataclass(frozen=True)
class GroundTruth:
    poses: Tuple[Pose, ...]
    landmarks: FloatArray

    @property
    def estimate(self) -> Estimate:
        return Estimate(poses=self.poses, landmarks=self.landmarks)


def viewing_pose(direction: FloatArray, roll: float, distance: float) -> Pose:
    """
    Pose at −distance · direction whose z axis points at the origin.

    Args:
        direction (FloatArray): Unit viewing direction in the world frame.
        roll (float): Rotation about the optical axis (rad).
        distance (float): Distance to the origin (m).
    """
    rotation = exp_so3(roll * Z_AXIS) @ rotation_between(direction, Z_AXIS)
    position = -distance * np.asarray(direction, float)
    return Pose(rotation, rotation @ position)


def _viewpoints(s: Scenario, rng: np.random.Generator) -> List[Pose]:
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    axis = np.cross(direction, rng.standard_normal(3))
    axis /= np.linalg.norm(axis)
    step = np.deg2rad(s.pose_angle)
    poses = []
    for i in range(s.pose_count()):
        d = exp_so3(i * step * axis) @ direction
        poses.append(viewing_pose(d, rng.uniform(-np.pi, np.pi), s.distance))
    return poses


def _ellipsoid(s: Scenario, major_axis: FloatArray) -> FloatArray:
    minor, major = s.axis_stds()
    r = rotation_between(Z_AXIS, major_axis)
    return r @ np.diag([minor**2, minor**2, major**2]) @ r.T


def _measure(
    s: Scenario,
    point: FloatArray,
    rng: np.random.Generator,
    noise_rng: np.random.Generator,
) -> Tuple[FloatArray, FloatArray]:
    """Noisy measurement of a pose-frame point and its weight."""
    kind = ScenarioKind(s.kind)
    if kind in STEREO_KINDS:
        cam = s.camera()
        pixel = project(cam, point)
        if not s.add_noise:
            return point.copy(), propagate_covariance(cam, pixel).weight
        measured = propagate_covariance(cam, sample_pixel_noise(cam, pixel, noise_rng))
        return measured.point, measured.weight
    if kind == ScenarioKind.ALIGNED:
        cov = _ellipsoid(s, Z_AXIS)
    elif kind == ScenarioKind.PERTURBED:
        tilt = exp_so3(rng.normal(0.0, s.perturbation_std, size=3))
        cov = _ellipsoid(s, tilt @ Z_AXIS)
    else:
        cov = _ellipsoid(s, point / np.linalg.norm(point))
    weight = symmetrize(np.linalg.inv(cov))
    if not s.add_noise:
        return point.copy(), weight
    return point + cholesky(cov) @ noise_rng.standard_normal(3), weight


def _noisy_pose(s: Scenario, pose: Pose, noise_rng: np.random.Generator) -> Pose:
    """
    Left-perturbed pose measurement. The Frobenius rotation term weighted
    1/σ² has information 2/σ² per axis, so the rotation noise std is σ/√2.
    """
    if not s.add_noise:
        return pose
    rotation = exp_so3(noise_rng.normal(0.0, s.relpose_noise / np.sqrt(2.0), size=3))
    return Pose(
        rotation @ pose.rotation,
        pose.translation + noise_rng.normal(0.0, s.relpose_noise, size=3),
    )


def generate_scenario(
    s: Scenario, noise_rng: Optional[np.random.Generator] = None
) -> Tuple[MeasurementGraph, GroundTruth]:
    """
    Build a measurement graph and its ground truth.

    Geometry (landmarks, poses, ellipsoid tilts) comes from s.seed alone;
    measurement noise comes from noise_rng when given, so Monte-Carlo trials
    can resample noise on a fixed geometry.

    Args:
        s (Scenario): Simulation parameters.
        noise_rng (np.random.Generator, optional): Source of measurement noise.

    Returns:
        tuple[MeasurementGraph, GroundTruth]: Localization graph with known
            landmarks, or a SLAM graph with a prior on pose 0 for slam-stereo.
    """
    rng = np.random.default_rng(s.seed)
    noise_rng = noise_rng if noise_rng is not None else rng
    kind = ScenarioKind(s.kind)
    half = 0.5 * s.cube_size
    landmarks = rng.uniform(-half, half, size=(s.n_landmarks, 3))
    poses = _viewpoints(s, rng)
    edges = []
    for i, pose in enumerate(poses):
        for k, m in enumerate(landmarks):
            measurement, weight = _measure(s, pose.apply(m), rng, noise_rng)
            edges.append(LandmarkEdge(i, k, measurement, weight))
    relpose = [
        RelativePoseEdge(
            i,
            i + 1,
            _noisy_pose(s, poses[i].compose(poses[i + 1].inverse()), noise_rng),
            s.relpose_noise,
            s.relpose_noise,
        )
        for i in range(len(poses) - 1)
    ]
    if kind == ScenarioKind.SLAM_STEREO:
        prior = PriorEdge(
            0,
            _noisy_pose(s, poses[0].inverse(), noise_rng),
            s.relpose_noise,
            s.relpose_noise,
        )
        graph = MeasurementGraph(
            len(poses), s.n_landmarks, edges, relpose, [prior], known_landmarks=None
        )
    else:
        graph = MeasurementGraph(
            len(poses),
            s.n_landmarks,
            edges,
            relpose,
            known_landmarks=dict(enumerate(landmarks)),
        )
    log.debug(
        f"Generated {kind.value} scenario seed={s.seed} poses={len(poses)} "
        f"edges={len(edges)}"
    )
    return graph, GroundTruth(poses=tuple(poses), landmarks=landmarks)
