"""
Finite-difference Hessians of the tangent-space cost.
"""

from typing import Callable, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.estimation.gauss_newton import retract
from src.geometry import Pose
from src.linalg import FloatArray, symmetrize
from src.problems import MeasurementGraph, graph_objective


def central_difference_hessian(
    f: Callable[[FloatArray], float], x0: npt.ArrayLike, step: float = 1e-4
) -> FloatArray:
    """
    Hessian of a scalar function by second-order central differences.

    Args:
        f (Callable): Function of a 1-D array.
        x0 (ArrayLike): Evaluation point.
        step (float, optional): Difference step. Defaults to 1e-4.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    p = x0.size
    eye = np.eye(p) * step
    out = np.zeros((p, p))
    f0 = f(x0)
    for i in range(p):
        out[i, i] = (f(x0 + eye[i]) - 2.0 * f0 + f(x0 - eye[i])) / step**2
        for j in range(i + 1, p):
            value = (
                f(x0 + eye[i] + eye[j])
                - f(x0 + eye[i] - eye[j])
                - f(x0 - eye[i] + eye[j])
                + f(x0 - eye[i] - eye[j])
            ) / (4.0 * step**2)
            out[i, j] = out[j, i] = value
    return symmetrize(out)


def numerical_hessian(
    graph: MeasurementGraph,
    poses: Sequence[Pose],
    landmarks: Optional[npt.ArrayLike] = None,
    step: float = 1e-4,
) -> FloatArray:
    """
    Hessian of ½ Σ eᵀWe with respect to left pose perturbations (and
    additive landmark perturbations when landmarks are given), at zero.

    The factor ½ makes the result the Fisher information of measurements
    with covariances W⁻¹.
    """
    lm = None if landmarks is None else np.asarray(landmarks, dtype=np.float64)

    def half_cost(x: FloatArray) -> float:
        new_poses, new_landmarks = retract(poses, lm, x)
        return 0.5 * graph_objective(graph, new_poses, new_landmarks)

    size = 6 * len(poses) + (0 if lm is None else lm.size)
    return central_difference_hessian(half_cost, np.zeros(size), step)
