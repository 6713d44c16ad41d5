"""
Measurement graphs for localization and landmark SLAM.

Landmark edges carry a Euclidean measurement of a landmark in the pose
frame together with its matrix weight; relative-pose and prior edges carry
a measured pose with scalar rotation and translation weights.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.errors import (
    GaugeUnfixed,
    InsufficientLandmarks,
    InvalidWeight,
    MissingLandmark,
)
from src.geometry import Pose
from src.linalg import FloatArray, sym_eigvals


@dataclass(frozen=True)
class LandmarkEdge:
    """
    Observation of landmark k from pose i.

    Args:
        pose (int): Observing pose index.
        landmark (int): Landmark index.
        measurement (FloatArray): Measured landmark position in the pose frame (m).
        weight (FloatArray): 3×3 PSD weight W = Σ⁻¹ (m⁻²).
    """

    pose: int
    landmark: int
    measurement: FloatArray
    weight: FloatArray

    def __post_init__(self):
        object.__setattr__(self, "measurement", np.asarray(self.measurement, float))
        w = np.asarray(self.weight, float)
        scale = max(1.0, float(np.abs(w).max())) if w.size else 1.0
        if w.shape != (3, 3) or not np.allclose(w, w.T, atol=1e-12 * scale):
            raise InvalidWeight("landmark weight must be a symmetric 3×3 matrix")
        eigs = sym_eigvals(w)
        if eigs[-1] < -1e-12 * max(1.0, eigs[0]):
            raise InvalidWeight(f"landmark weight is not PSD (min eig {eigs[-1]})")
        object.__setattr__(self, "weight", 0.5 * (w + w.T))


@dataclass(frozen=True)
class RelativePoseEdge:
    """
    Relative pose measurement T̃_ij ≈ T_i T_j⁻¹.

    Args:
        i (int): First pose.
        j (int): Second pose.
        measurement (Pose): Measured relative pose.
        sigma (float): Rotation weight scale; the rotation term is weighted 1/sigma².
        tau (float): Translation weight scale; the translation term is weighted 1/tau².
    """

    i: int
    j: int
    measurement: Pose
    sigma: float
    tau: float

    def __post_init__(self):
        if self.sigma <= 0 or self.tau <= 0:
            raise InvalidWeight(f"sigma={self.sigma} and tau={self.tau} must be > 0")


@dataclass(frozen=True)
class PriorEdge:
    """
    Prior T̃_0j ≈ T_j⁻¹ on pose j, fixing the global frame.

    Args:
        pose (int): Pose index.
        measurement (Pose): Measured inverse pose.
        sigma (float): Rotation weight scale.
        tau (float): Translation weight scale.
    """

    pose: int
    measurement: Pose
    sigma: float
    tau: float

    def __post_init__(self):
        if self.sigma <= 0 or self.tau <= 0:
            raise InvalidWeight(f"sigma={self.sigma} and tau={self.tau} must be > 0")


@dataclass(frozen=True)
class Estimate:
    """
    Assignment of poses and, in SLAM mode, world landmark positions.

    Args:
        poses (tuple[Pose, ...]): One pose per graph pose.
        landmarks (FloatArray, optional): (n_landmarks, 3) world positions.
    """

    poses: tuple
    landmarks: Optional[FloatArray] = None


@dataclass
class MeasurementGraph:
    """
    Directed measurement graph.

    Args:
        n_poses (int): Number of poses.
        n_landmarks (int): Number of landmarks.
        landmark_edges (list[LandmarkEdge]): Pose-landmark observations.
        relpose_edges (list[RelativePoseEdge], optional): Pose-pose edges.
        prior_edges (list[PriorEdge], optional): Prior factors.
        known_landmarks (dict[int, FloatArray], optional): World landmark
            positions; set for localization, None for SLAM.
    """

    n_poses: int
    n_landmarks: int
    landmark_edges: List[LandmarkEdge]
    relpose_edges: List[RelativePoseEdge] = field(default_factory=list)
    prior_edges: List[PriorEdge] = field(default_factory=list)
    known_landmarks: Optional[Dict[int, FloatArray]] = None

    def __post_init__(self):
        for e in self.landmark_edges:
            self._check_pose(e.pose)
            if not 0 <= e.landmark < self.n_landmarks:
                raise ValueError(f"landmark index {e.landmark} out of range")
        for e in self.relpose_edges:
            self._check_pose(e.i)
            self._check_pose(e.j)
        for e in self.prior_edges:
            self._check_pose(e.pose)
        if self.known_landmarks is not None:
            self.known_landmarks = {
                int(k): np.asarray(v, dtype=np.float64)
                for k, v in self.known_landmarks.items()
            }

    def _check_pose(self, i: int) -> None:
        if not 0 <= i < self.n_poses:
            raise ValueError(f"pose index {i} out of range")

    @property
    def is_slam(self) -> bool:
        return self.known_landmarks is None

    def landmark(self, k: int) -> FloatArray:
        """
        Known world position of landmark k.

        Raises:
            MissingLandmark: If k has no known position.
        """
        if self.known_landmarks is None or k not in self.known_landmarks:
            raise MissingLandmark(k)
        return self.known_landmarks[k]

    def edges_of(self, pose: int) -> List[LandmarkEdge]:
        return [e for e in self.landmark_edges if e.pose == pose]

    def observed_by(self, pose: int) -> List[int]:
        """Sorted landmark indices observed from a pose."""
        return sorted({e.landmark for e in self.landmark_edges if e.pose == pose})

    def require_gauge(self) -> None:
        """
        Raises:
            GaugeUnfixed: If there is no prior edge.
        """
        if not self.prior_edges:
            raise GaugeUnfixed("SLAM graph needs at least one prior edge")


def graph_objective(
    graph: MeasurementGraph,
    poses: Sequence[Pose],
    landmarks: Optional[npt.ArrayLike] = None,
) -> float:
    """
    Direct factor-sum cost Σ eᵀWe of an assignment.

    Args:
        graph (MeasurementGraph): Measurement graph.
        poses (Sequence[Pose]): Pose assignment.
        landmarks (ArrayLike, optional): World landmarks; defaults to the
            graph's known landmarks.

    Returns:
        float: Landmark, relative-pose and prior costs summed.
    """
    lm = None if landmarks is None else np.asarray(landmarks, dtype=np.float64)
    total = 0.0
    for e in graph.landmark_edges:
        m = lm[e.landmark] if lm is not None else graph.landmark(e.landmark)
        r = e.measurement - poses[e.pose].apply(m)
        total += float(r @ e.weight @ r)
    for e in graph.relpose_edges:
        total += relpose_residual_cost(e, poses[e.i], poses[e.j])
    for e in graph.prior_edges:
        total += prior_residual_cost(e, poses[e.pose])
    return total


def relpose_residual_cost(e: RelativePoseEdge, pose_i: Pose, pose_j: Pose) -> float:
    """Cost of vec(T̃_ij T_j − T_i) with rotation/translation weights."""
    c_m, t_m = e.measurement.rotation, e.measurement.translation
    rot = c_m @ pose_j.rotation - pose_i.rotation
    trans = pose_i.translation - c_m @ pose_j.translation - t_m
    return float(np.sum(rot**2) / e.sigma**2 + trans @ trans / e.tau**2)


def prior_residual_cost(e: PriorEdge, pose: Pose) -> float:
    """Cost of vec(T̃_0j T_j − I) with rotation/translation weights."""
    c_m, t_m = e.measurement.rotation, e.measurement.translation
    rot = c_m @ pose.rotation - np.eye(3)
    trans = -c_m @ pose.translation - t_m
    return float(np.sum(rot**2) / e.sigma**2 + trans @ trans / e.tau**2)


@dataclass(frozen=True)
class NondegeneracyReport:
    """Rank of the landmark difference matrix and coplanarity flag."""

    rank: int
    coplanar: bool


def check_landmark_nondegeneracy(
    landmarks: npt.ArrayLike, tol: float = 1e-9
) -> NondegeneracyReport:
    """
    Rank test on D = stacked (m_k − m_1)ᵀ.

    Args:
        landmarks (ArrayLike): (k, 3) landmark positions, k ≥ 4.
        tol (float, optional): Relative singular value threshold.

    Raises:
        InsufficientLandmarks: If fewer than 4 landmarks are given.
    """
    pts = np.asarray(landmarks, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 4:
        raise InsufficientLandmarks("need at least 4 landmarks")
    d = pts[1:] - pts[0]
    s = np.linalg.svd(d, compute_uv=False)
    rank = int(np.sum(s > tol * max(s[0], 1e-300)))
    return NondegeneracyReport(rank=rank, coplanar=rank < 3)
