from .stereo import (
    EuclideanMeasurement,
    PixelMeasurement,
    StereoCamera,
    anisotropicity,
    back_project,
    inverse_jacobian,
    pixel_covariance,
    project,
    propagate_covariance,
    sample_pixel_noise,
)

__all__ = [
    "EuclideanMeasurement",
    "PixelMeasurement",
    "StereoCamera",
    "anisotropicity",
    "back_project",
    "inverse_jacobian",
    "pixel_covariance",
    "project",
    "propagate_covariance",
    "sample_pixel_noise",
]
