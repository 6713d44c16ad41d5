"""
Rigid-body poses in the world→pose convention.

A pose (C, t) maps a world point x to C x − t, i.e. its homogeneous form
is T = [[C, −t], [0, 1]].
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.geometry.so3 import exp_so3, log_so3
from src.linalg import FloatArray


@dataclass(frozen=True)
class TangentVector:
    """
    Left perturbation coordinates of a pose.

    Args:
        x_r (FloatArray): Rotational part (radians).
        x_t (FloatArray): Translational part (meters).
    """

    x_r: FloatArray
    x_t: FloatArray

    def as_array(self) -> FloatArray:
        return np.concatenate([self.x_r, self.x_t])

    @classmethod
    def from_array(cls, x: npt.ArrayLike) -> "TangentVector":
        x = np.asarray(x, dtype=np.float64)
        return cls(x_r=x[:3].copy(), x_t=x[3:6].copy())


@dataclass(frozen=True)
class Pose:
    """
    Pose with rotation C and translation t (world→pose, pose frame).

    Args:
        rotation (FloatArray): 3×3 rotation matrix.
        translation (FloatArray): 3-vector in meters.
    """

    rotation: FloatArray
    translation: FloatArray

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, float))
        object.__setattr__(self, "translation", np.asarray(self.translation, float))

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, t: npt.ArrayLike) -> "Pose":
        t = np.asarray(t, dtype=np.float64)
        return cls(t[:3, :3].copy(), -t[:3, 3].copy())

    def matrix(self) -> FloatArray:
        out = np.eye(4)
        out[:3, :3] = self.rotation
        out[:3, 3] = -self.translation
        return out

    def apply(self, x: npt.ArrayLike) -> FloatArray:
        """Map world point(s) x (shape (3,) or (k, 3)) into the pose frame."""
        x = np.asarray(x, dtype=np.float64)
        return x @ self.rotation.T - self.translation

    def inverse(self) -> "Pose":
        return Pose(self.rotation.T, -self.rotation.T @ self.translation)

    def compose(self, other: "Pose") -> "Pose":
        """Return self ∘ other (other is applied first)."""
        return Pose(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def retract(self, delta: TangentVector) -> "Pose":
        """Left perturbation: C ← exp(x_r^) C, t ← t + x_t."""
        return Pose(exp_so3(delta.x_r) @ self.rotation, self.translation + delta.x_t)

    def local(self, reference: "Pose") -> TangentVector:
        """Tangent vector x with reference.retract(x) == self."""
        return TangentVector(
            x_r=log_so3(self.rotation @ reference.rotation.T),
            x_t=self.translation - reference.translation,
        )
