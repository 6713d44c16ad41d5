"""
Rounding of an SDP solution to a feasible QCQP point.
"""

import logging

import numpy as np

from src.errors import InvalidInput
from src.geometry import Pose, project_to_so3
from src.problems import Estimate, VariableLayout, read_blocks
from src.sdp.solver import SdpSolution, SolverStatus

log = logging.getLogger(__name__)


def extract_rounded_solution(
    solution: SdpSolution, layout: VariableLayout, allow_failed: bool = False
) -> Estimate:
    """
    Read the homogenizing column of Z and project it onto the feasible set.

    The column is divided by Z[w, w], which normalizes the sign to w = +1.
    Rotation blocks are projected onto SO(3); translations and world
    landmarks are taken as they are.

    Args:
        solution (SdpSolution): Solved relaxation.
        layout (VariableLayout): Layout of the lifted variable.
        allow_failed (bool, optional): Accept a NUMERICAL_FAILURE iterate.

    Returns:
        Estimate: Poses and, for SLAM layouts, world landmarks.

    Raises:
        InvalidInput: For a failed solve unless allow_failed is set.
        DegenerateProjection: If a rotation block cannot be projected.
    """
    if solution.status == SolverStatus.NUMERICAL_FAILURE and not allow_failed:
        raise InvalidInput("cannot round a failed solve")
    z = solution.z_mat
    ww = z[layout.w, layout.w]
    if ww <= 0.0:
        raise InvalidInput(f"Z[w, w] = {ww} is not positive")
    column = z[:, layout.w] / ww
    blocks, landmarks = read_blocks(column, layout)
    poses = tuple(Pose(project_to_so3(c), t) for c, t in blocks)
    log.debug(
        "Rotation projection distances "
        f"{[float(np.linalg.norm(c - p.rotation)) for (c, _), p in zip(blocks, poses)]}"
    )
    if landmarks is not None:
        landmarks = np.asarray(landmarks)
    return Estimate(poses=poses, landmarks=landmarks)
