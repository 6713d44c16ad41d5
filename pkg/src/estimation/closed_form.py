"""
Closed-form solution of the scalar-weighted Wahba problem.
"""

import logging
from typing import List, Optional

import numpy as np
import numpy.typing as npt

from src.errors import InsufficientLandmarks
from src.geometry import Pose, project_to_so3
from src.problems import Estimate, MeasurementGraph

log = logging.getLogger(__name__)


def closed_form_wahba(
    landmarks: npt.ArrayLike,
    measurements: npt.ArrayLike,
    weights: Optional[npt.ArrayLike] = None,
) -> Pose:
    """
    Global minimizer of Σ w_k ‖m̃_k − (C m_k − t)‖².

    The translation is eliminated through weighted centroids; the rotation
    is the SO(3) projection of the weighted cross-covariance.

    Args:
        landmarks (ArrayLike): (k, 3) world positions m_k.
        measurements (ArrayLike): (k, 3) measured positions m̃_k in the pose frame.
        weights (ArrayLike, optional): k positive scalar weights.

    Returns:
        Pose: Optimal (C, t).

    Raises:
        InsufficientLandmarks: If fewer than 3 points are given.
    """
    m = np.asarray(landmarks, dtype=np.float64)
    y = np.asarray(measurements, dtype=np.float64)
    if m.shape[0] < 3:
        raise InsufficientLandmarks("need at least 3 points for a unique rotation")
    w = np.ones(m.shape[0]) if weights is None else np.asarray(weights, float)
    w = w / w.sum()
    m_bar, y_bar = w @ m, w @ y
    cross = ((y - y_bar) * w[:, None]).T @ (m - m_bar)
    rotation = project_to_so3(cross)
    return Pose(rotation, rotation @ m_bar - y_bar)


def closed_form_initialization(graph: MeasurementGraph) -> List[Pose]:
    """
    Per-pose closed-form estimates using the mean eigenvalue of each edge
    weight as its scalar weight. Poses with fewer than 3 edges get identity.
    """
    poses = []
    for i in range(graph.n_poses):
        edges = graph.edges_of(i)
        if len(edges) < 3:
            log.warning(f"Pose {i} has {len(edges)} landmark edges, using identity")
            poses.append(Pose.identity())
            continue
        poses.append(
            closed_form_wahba(
                [graph.landmark(e.landmark) for e in edges],
                [e.measurement for e in edges],
                [np.trace(e.weight) / 3.0 for e in edges],
            )
        )
    return poses


def slam_initialization(graph: MeasurementGraph) -> Estimate:
    """
    Poses from the prior edges (identity when a pose has none) and each
    landmark back-transformed from its first observation.

    Raises:
        GaugeUnfixed: If the graph has no prior edge.
    """
    graph.require_gauge()
    poses = [Pose.identity() for _ in range(graph.n_poses)]
    for e in graph.prior_edges:
        poses[e.pose] = e.measurement.inverse()
    landmarks = np.zeros((graph.n_landmarks, 3))
    seen = set()
    for e in graph.landmark_edges:
        if e.landmark in seen:
            continue
        seen.add(e.landmark)
        pose = poses[e.pose]
        landmarks[e.landmark] = pose.rotation.T @ (e.measurement + pose.translation)
    return Estimate(poses=tuple(poses), landmarks=landmarks)
