"""
Rectified pinhole stereo camera.

Pixel measurements y = (p_ul, p_vl, d) hold the left-image coordinates and
the disparity. The inverse model maps y back to a point in the camera frame
and its Jacobian propagates pixel noise into a Euclidean covariance whose
inverse is the matrix weight of a landmark edge.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.errors import BehindCamera, DegenerateCovariance, InvalidDisparity
from src.linalg import FloatArray, sym_eigvals


@dataclass(frozen=True)
class StereoCamera:
    """
    Stereo camera intrinsics and pixel noise.

    Args:
        b (float): Baseline (m).
        f_u (float): Horizontal focal length (pix).
        f_v (float): Vertical focal length (pix).
        c_u (float): Horizontal principal point (pix).
        c_v (float): Vertical principal point (pix).
        sigma_u (float): Horizontal pixel noise std (pix).
        sigma_v (float): Vertical pixel noise std (pix).
    """

    b: float = 0.24
    f_u: float = 484.5
    f_v: float = 484.5
    c_u: float = 0.0
    c_v: float = 0.0
    sigma_u: float = 6.32
    sigma_v: float = 11.45

    def __post_init__(self):
        if self.b <= 0 or self.f_u <= 0 or self.f_v <= 0:
            raise ValueError("baseline and focal lengths must be positive")
        if self.sigma_u < 0 or self.sigma_v < 0:
            raise ValueError("pixel noise must be non-negative")

    def with_pixel_std(self, sigma: float) -> "StereoCamera":
        """Copy of this camera with sigma_u = sigma_v = sigma."""
        return StereoCamera(
            self.b, self.f_u, self.f_v, self.c_u, self.c_v, sigma, sigma
        )


@dataclass(frozen=True)
class PixelMeasurement:
    """Left pixel coordinates and disparity (pix)."""

    p_ul: float
    p_vl: float
    d: float

    def as_array(self) -> FloatArray:
        return np.array([self.p_ul, self.p_vl, self.d])

    @classmethod
    def from_array(cls, y: npt.ArrayLike) -> "PixelMeasurement":
        p_ul, p_vl, d = np.asarray(y, dtype=np.float64)
        return cls(float(p_ul), float(p_vl), float(d))


@dataclass(frozen=True)
class EuclideanMeasurement:
    """
    Back-projected point with its covariance and matrix weight.

    Args:
        point (FloatArray): Point in the camera frame (m).
        covariance (FloatArray): 3×3 covariance (m²).
        weight (FloatArray): Inverse covariance (m⁻²).
    """

    point: FloatArray
    covariance: FloatArray
    weight: FloatArray


def project(cam: StereoCamera, x_c: npt.ArrayLike) -> PixelMeasurement:
    """
    Project a camera-frame point to (p_ul, p_vl, d).

    Raises:
        BehindCamera: If the point has z ≤ 0.
    """
    x, y, z = np.asarray(x_c, dtype=np.float64)
    if z <= 0:
        raise BehindCamera(f"point depth {z} is not positive")
    return PixelMeasurement(
        p_ul=cam.f_u * x / z + cam.c_u,
        p_vl=cam.f_v * y / z + cam.c_v,
        d=cam.f_u * cam.b / z,
    )


def _check_disparity(y: PixelMeasurement) -> None:
    if y.d <= 0:
        raise InvalidDisparity(f"disparity {y.d} is not positive")


def back_project(cam: StereoCamera, y: PixelMeasurement) -> FloatArray:
    """
    Inverse stereo model g⁻¹(y).

    The vertical component carries the f_u/f_v factor so that project and
    back_project are exact inverses and the result agrees with
    inverse_jacobian.

    Raises:
        InvalidDisparity: If d ≤ 0.
    """
    _check_disparity(y)
    scale = cam.b / y.d
    return scale * np.array(
        [
            y.p_ul - cam.c_u,
            cam.f_u / cam.f_v * (y.p_vl - cam.c_v),
            cam.f_u,
        ]
    )


def inverse_jacobian(cam: StereoCamera, y: PixelMeasurement) -> FloatArray:
    """
    Jacobian G = ∂g⁻¹/∂y evaluated at the measurement.

    Raises:
        InvalidDisparity: If d ≤ 0.
    """
    _check_disparity(y)
    d = y.d
    ratio = cam.f_u / cam.f_v
    return cam.b * np.array(
        [
            [1.0 / d, 0.0, -(y.p_ul - cam.c_u) / d**2],
            [0.0, ratio / d, -ratio * (y.p_vl - cam.c_v) / d**2],
            [0.0, 0.0, -cam.f_u / d**2],
        ]
    )


def pixel_covariance(cam: StereoCamera) -> FloatArray:
    """Covariance of (p_ul, p_vl, d) for independent left/right pixel noise."""
    su2 = cam.sigma_u**2
    sv2 = cam.sigma_v**2
    return np.array([[su2, 0.0, su2], [0.0, sv2, 0.0], [su2, 0.0, 2.0 * su2]])


def propagate_covariance(
    cam: StereoCamera, y: PixelMeasurement
) -> EuclideanMeasurement:
    """
    Back-project a measurement and propagate its pixel covariance.

    Args:
        cam (StereoCamera): Camera model.
        y (PixelMeasurement): Measurement to linearize about.

    Returns:
        EuclideanMeasurement: Point, Σ_x = G Σ_y Gᵀ and W = Σ_x⁻¹.

    Raises:
        InvalidDisparity: If d ≤ 0.
        DegenerateCovariance: If Σ_x is singular.
    """
    g = inverse_jacobian(cam, y)
    cov = g @ pixel_covariance(cam) @ g.T
    cov = 0.5 * (cov + cov.T)
    eigs = sym_eigvals(cov)
    if eigs[-1] <= 1e-14 * max(eigs[0], 1e-300):
        raise DegenerateCovariance("propagated covariance is singular")
    weight = np.linalg.inv(cov)
    return EuclideanMeasurement(
        point=back_project(cam, y),
        covariance=cov,
        weight=0.5 * (weight + weight.T),
    )


def sample_pixel_noise(
    cam: StereoCamera, y_true: PixelMeasurement, rng: np.random.Generator
) -> PixelMeasurement:
    """
    Add stereo pixel noise to a noise-free measurement.

    Independent noise on the left and right horizontal coordinates and the
    shared vertical coordinate gives Σ_y in (p_ul, p_vl, d) space.
    """
    e_ul, e_ur = rng.normal(0.0, 1.0, size=2) * cam.sigma_u
    e_v = rng.normal(0.0, 1.0) * cam.sigma_v
    return PixelMeasurement(
        p_ul=y_true.p_ul + e_ul,
        p_vl=y_true.p_vl + e_v,
        d=y_true.d + e_ul - e_ur,
    )


def anisotropicity(cov: npt.ArrayLike) -> float:
    """
    Square root of the covariance condition number.

    Raises:
        DegenerateCovariance: If the smallest eigenvalue is not positive.
    """
    eigs = sym_eigvals(cov)
    if eigs[-1] <= 0:
        raise DegenerateCovariance(f"minimum eigenvalue {eigs[-1]} is not positive")
    return float(np.sqrt(eigs[0] / eigs[-1]))
