"""
Homogeneous cost matrices.

Each factor is written as a weighted residual e = B z that is linear in the
lifted variable z; its contribution to Q is BᵀWB, so zᵀQz equals the
factor cost eᵀWe on every feasible lift.
"""

from typing import List, Mapping, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.errors import MissingLandmark
from src.geometry import Pose
from src.linalg import FloatArray
from src.problems.forms import LinearForm, QuadraticForm
from src.problems.graph import LandmarkEdge, PriorEdge, RelativePoseEdge
from src.problems.layout import VariableLayout, localization_layout


def add_weighted_residual(
    form: QuadraticForm, residual: Sequence[LinearForm], weight: npt.ArrayLike
) -> QuadraticForm:
    """Add eᵀWe for a residual given as linear forms."""
    w = np.atleast_2d(np.asarray(weight, dtype=np.float64))
    for a, ra in enumerate(residual):
        for b, rb in enumerate(residual):
            if w[a, b] != 0.0:
                form.add_product(ra, rb, w[a, b])
    return form


def landmark_residual(
    layout: VariableLayout, pose: int, measurement: FloatArray, landmark: FloatArray
) -> List[LinearForm]:
    """e = m̃ w − C m + t for a known world landmark m."""
    out = []
    for a in range(3):
        form: LinearForm = {layout.w: float(measurement[a])}
        for b in range(3):
            form[layout.c_entry(pose, a, b)] = -float(landmark[b])
        form[layout.translation(pose) + a] = 1.0
        out.append(form)
    return out


def substitution_residual(
    layout: VariableLayout, pose: int, landmark: int, measurement: FloatArray
) -> List[LinearForm]:
    """e = m̃ w − m_i^k in the SLAM layout."""
    start = layout.substitution(pose, landmark)
    return [{layout.w: float(measurement[a]), start + a: -1.0} for a in range(3)]


def _rotation_residual(
    layout: VariableLayout, rotation: FloatArray, j: int, i: Optional[int] = None
) -> List[LinearForm]:
    """vec(C̃ C_j − C_i), or vec(C̃ C_j − I w) when i is None."""
    out = []
    for b in range(3):
        for a in range(3):
            form: LinearForm = {}
            for c in range(3):
                if rotation[a, c] != 0.0:
                    form[layout.c_entry(j, c, b)] = float(rotation[a, c])
            if i is None:
                if a == b:
                    form[layout.w] = form.get(layout.w, 0.0) - 1.0
            else:
                idx = layout.c_entry(i, a, b)
                form[idx] = form.get(idx, 0.0) - 1.0
            out.append(form)
    return out


def _translation_residual(
    layout: VariableLayout, measurement: Pose, j: int, i: Optional[int] = None
) -> List[LinearForm]:
    """t_i − C̃ t_j − t̃ w, with t_i dropped when i is None."""
    c_m, t_m = measurement.rotation, measurement.translation
    out = []
    for a in range(3):
        form: LinearForm = {layout.w: -float(t_m[a])}
        for c in range(3):
            if c_m[a, c] != 0.0:
                form[layout.translation(j) + c] = -float(c_m[a, c])
        if i is not None:
            idx = layout.translation(i) + a
            form[idx] = form.get(idx, 0.0) + 1.0
        out.append(form)
    return out


def add_relpose_terms(
    form: QuadraticForm, edge: RelativePoseEdge, layout: VariableLayout
) -> QuadraticForm:
    rot = _rotation_residual(layout, edge.measurement.rotation, edge.j, edge.i)
    trans = _translation_residual(layout, edge.measurement, edge.j, edge.i)
    add_weighted_residual(form, rot, np.eye(9) / edge.sigma**2)
    return add_weighted_residual(form, trans, np.eye(3) / edge.tau**2)


def add_prior_terms(
    form: QuadraticForm, edge: PriorEdge, layout: VariableLayout
) -> QuadraticForm:
    rot = _rotation_residual(layout, edge.measurement.rotation, edge.pose)
    trans = _translation_residual(layout, edge.measurement, edge.pose)
    add_weighted_residual(form, rot, np.eye(9) / edge.sigma**2)
    return add_weighted_residual(form, trans, np.eye(3) / edge.tau**2)


def build_wahba_cost(
    edges: Sequence[LandmarkEdge], landmarks: Mapping[int, npt.ArrayLike]
) -> FloatArray:
    """
    13×13 cost matrix of a single-pose problem with known landmarks.

    Edges may reference any pose index; all are attached to the single pose.

    Args:
        edges (Sequence[LandmarkEdge]): Observations from the pose.
        landmarks (Mapping[int, ArrayLike]): Known world landmark positions.

    Returns:
        FloatArray: Q with zᵀQz = Σ eᵀWe for z = [vec(C), t, w].

    Raises:
        MissingLandmark: If an edge references an unknown landmark.
    """
    layout = localization_layout(1)
    form = QuadraticForm(layout.dim)
    for e in edges:
        if e.landmark not in landmarks:
            raise MissingLandmark(e.landmark)
        m = np.asarray(landmarks[e.landmark], dtype=np.float64)
        residual = landmark_residual(layout, 0, e.measurement, m)
        add_weighted_residual(form, residual, e.weight)
    return form.build().toarray()


def build_relpose_cost(edge: RelativePoseEdge, layout: VariableLayout) -> FloatArray:
    """
    Contribution of one relative-pose edge:
    (1/σ²)‖C̃C_j − C_i‖_F² + (1/τ²)‖t_i − C̃t_j − t̃‖².
    """
    return add_relpose_terms(QuadraticForm(layout.dim), edge, layout).build().toarray()


def build_prior_cost(edge: PriorEdge, layout: VariableLayout) -> FloatArray:
    """Prior contribution (1/σ²)‖C̃C_j − I‖_F² + (1/τ²)‖C̃t_j + t̃‖²."""
    return add_prior_terms(QuadraticForm(layout.dim), edge, layout).build().toarray()
