"""
Test configuration for pytest.

This file is automatically loaded by pytest and provides shared fixtures
for all tests in the project.
"""

import os
import sys

import numpy as np
import pytest

# Add the project root directory to Python path to ensure imports work correctly
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../")))

from src.experiments import Scenario, ScenarioKind, generate_scenario  # noqa: E402

# Tolerances shared across numerical tests
TIGHT_TOL = 1e-6
CERT_TOL = 1e-8


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(42)


@pytest.fixture
def noise_free_wahba():
    """Noise-free single-pose localization with anisotropic weights."""
    scenario = Scenario(
        kind=ScenarioKind.ALIGNED,
        n_landmarks=10,
        noise_std=0.05,
        anisotropy=5.0,
        add_noise=False,
        seed=3,
    )
    return generate_scenario(scenario)


@pytest.fixture
def noisy_wahba():
    """Single-pose localization with small anisotropic noise."""
    scenario = Scenario(
        kind=ScenarioKind.ALIGNED,
        n_landmarks=10,
        noise_std=0.01,
        anisotropy=3.0,
        seed=5,
    )
    return generate_scenario(scenario)


@pytest.fixture
def two_pose_graph():
    """Two stereo poses linked by a relative-pose edge."""
    scenario = Scenario(
        kind=ScenarioKind.TWO_POSE,
        n_landmarks=8,
        pixel_std=1.0,
        relpose_noise=0.05,
        seed=11,
    )
    return generate_scenario(scenario)


@pytest.fixture
def small_slam_graph():
    """One-pose stereo SLAM with five landmarks and a prior."""
    scenario = Scenario(
        kind=ScenarioKind.SLAM_STEREO,
        n_landmarks=5,
        distance=2.0,
        pixel_std=0.5,
        relpose_noise=0.01,
        seed=7,
    )
    return generate_scenario(scenario)
