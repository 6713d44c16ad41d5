"""
Tests for finite-difference Hessians in src.estimation.hessian.
"""

import numpy as np

from src.estimation import (
    central_difference_hessian,
    gauss_newton_slam,
    numerical_hessian,
    slam_initialization,
)


def test_quadratic_hessian(rng):
    """Test that the Hessian of xᵀAx is 2A."""
    a = rng.standard_normal((4, 4))
    a = a + a.T
    hess = central_difference_hessian(lambda x: x @ a @ x, rng.standard_normal(4))
    np.testing.assert_allclose(hess, 2.0 * a, atol=1e-6)


def test_localization_hessian_is_psd(noise_free_wahba):
    """Test a positive definite pose Hessian at the noise-free optimum."""
    graph, truth = noise_free_wahba
    hess = numerical_hessian(graph, truth.poses)
    assert hess.shape == (6, 6)
    np.testing.assert_allclose(hess, hess.T)
    assert np.linalg.eigvalsh(hess)[0] > 0.0


def test_slam_hessian_size(small_slam_graph):
    """Test the joint pose and landmark Hessian at the SLAM optimum."""
    graph, _ = small_slam_graph
    result = gauss_newton_slam(graph, slam_initialization(graph))
    hess = numerical_hessian(graph, result.poses, result.landmarks)
    assert hess.shape == (6 + 3 * graph.n_landmarks,) * 2
    assert np.linalg.eigvalsh(hess)[0] > -1e-6 * np.abs(hess).max()
