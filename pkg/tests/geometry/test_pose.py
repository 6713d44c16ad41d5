"""
Tests for Pose and TangentVector in src.geometry.pose.
"""

import numpy as np
import pytest

from src.geometry import Pose, TangentVector, random_rotation


@pytest.fixture
def pose(rng):
    """Random pose."""
    return Pose(random_rotation(rng), rng.standard_normal(3))


class TestPose:
    """Test pose algebra in the world→pose convention."""

    def test_apply(self, pose, rng):
        """Test x ↦ C x − t for single points and stacks."""
        x = rng.standard_normal((4, 3))
        expected = np.array([pose.rotation @ p - pose.translation for p in x])
        np.testing.assert_allclose(pose.apply(x), expected)
        np.testing.assert_allclose(pose.apply(x[0]), expected[0])

    def test_matrix_round_trip(self, pose):
        """Test from_matrix(matrix()) and the −t column."""
        t = pose.matrix()
        np.testing.assert_allclose(t[:3, 3], -pose.translation)
        back = Pose.from_matrix(t)
        np.testing.assert_allclose(back.rotation, pose.rotation)
        np.testing.assert_allclose(back.translation, pose.translation)

    def test_inverse_composes_to_identity(self, pose, rng):
        """Test that T ∘ T⁻¹ maps every point to itself."""
        x = rng.standard_normal(3)
        np.testing.assert_allclose(pose.compose(pose.inverse()).apply(x), x, atol=1e-12)

    def test_compose_matches_matrix_product(self, pose, rng):
        """Test that compose agrees with homogeneous matrix products."""
        other = Pose(random_rotation(rng), rng.standard_normal(3))
        np.testing.assert_allclose(
            pose.compose(other).matrix(), pose.matrix() @ other.matrix(), atol=1e-12
        )

    def test_identity(self, rng):
        """Test that the identity pose leaves points unchanged."""
        x = rng.standard_normal(3)
        np.testing.assert_array_equal(Pose.identity().apply(x), x)


class TestTangent:
    """Test left retraction and its inverse."""

    def test_local_inverts_retract(self, pose, rng):
        """Test pose.retract(x).local(pose) = x."""
        x = TangentVector.from_array(0.3 * rng.standard_normal(6))
        back = pose.retract(x).local(pose)
        np.testing.assert_allclose(back.as_array(), x.as_array(), atol=1e-12)

    def test_zero_step(self, pose):
        """Test that a zero step leaves the pose unchanged."""
        moved = pose.retract(TangentVector.from_array(np.zeros(6)))
        np.testing.assert_allclose(moved.rotation, pose.rotation)
        np.testing.assert_allclose(moved.translation, pose.translation)
