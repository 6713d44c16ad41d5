"""
Feasible lifts z of pose/landmark assignments, and the inverse read-out.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from src.geometry import Pose
from src.linalg import FloatArray, unvec, vec
from src.problems.layout import BlockKind, VariableLayout, localization_layout


def lift_localization(
    poses: Sequence[Pose], layout: Optional[VariableLayout] = None, w: float = 1.0
) -> FloatArray:
    """z = [vec(C_0), t_0, ..., w]."""
    layout = layout or localization_layout(len(poses))
    z = np.zeros(layout.dim)
    for i, pose in enumerate(poses):
        z[layout.slice(f"c{i}")] = w * vec(pose.rotation)
        z[layout.slice(f"t{i}")] = w * pose.translation
    z[layout.w] = w
    return z


def lift_slam(
    poses: Sequence[Pose],
    landmarks: npt.ArrayLike,
    layout: VariableLayout,
    w: float = 1.0,
) -> FloatArray:
    """
    Lift with substitution blocks m_i^k = C_i m_k − t_i.

    Args:
        poses (Sequence[Pose]): Pose assignment.
        landmarks (ArrayLike): (n_landmarks, 3) world positions.
        layout (VariableLayout): SLAM layout.
        w (float, optional): Homogenizing value (±1). Defaults to 1.
    """
    lm = np.asarray(landmarks, dtype=np.float64)
    z = lift_localization(poses, layout, w)
    for block in layout.blocks:
        if block.kind == BlockKind.LANDMARK:
            k = int(block.name[1:])
            z[block.start : block.stop] = w * lm[k]
        elif block.kind == BlockKind.SUBSTITUTION:
            i, k = (int(s) for s in block.name[1:].split("_"))
            z[block.start : block.stop] = w * poses[i].apply(lm[k])
    return z


def read_blocks(
    z: npt.ArrayLike, layout: VariableLayout
) -> Tuple[list, Optional[FloatArray]]:
    """
    Raw (unprojected) rotation matrices, translations and landmarks of a
    lift, divided by w.

    Returns:
        tuple[list, FloatArray | None]: [(C_i, t_i)] and landmarks, the
            latter None when the layout has no landmark blocks.
    """
    z = np.asarray(z, dtype=np.float64)
    z = z / z[layout.w]
    blocks = [
        (unvec(z[layout.slice(f"c{i}")], 3, 3), z[layout.slice(f"t{i}")].copy())
        for i in range(layout.n_poses)
    ]
    landmark_blocks = [b for b in layout.blocks if b.kind == BlockKind.LANDMARK]
    if not landmark_blocks:
        return blocks, None
    landmarks = np.array([z[b.start : b.stop] for b in landmark_blocks])
    return blocks, landmarks
