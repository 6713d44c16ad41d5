"""
SO(3) utilities: skew operator, exponential and logarithm maps, projection
onto the rotation group and uniform sampling.
"""

import numpy as np
import numpy.typing as npt
from scipy.spatial.transform import Rotation

from src.errors import DegenerateProjection
from src.linalg import FloatArray, as_finite, vec

# so(3) basis matrices G_k = skew(e_k)
GENERATORS = np.array(
    [
        [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
        [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    ]
)

# columns are vec(G_k)
VEC_GENERATORS = np.stack([vec(g) for g in GENERATORS], axis=1)


def skew(v: npt.ArrayLike) -> FloatArray:
    """Return the matrix v^ such that v^ w = v × w."""
    x, y, z = np.asarray(v, dtype=np.float64)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def exp_so3(x_r: npt.ArrayLike) -> FloatArray:
    """
    Exponential map so(3) → SO(3).

    Args:
        x_r (ArrayLike): Rotation vector (radians).

    Returns:
        FloatArray: Rotation matrix exp(x_r^).
    """
    x_r = np.asarray(x_r, dtype=np.float64)
    if np.linalg.norm(x_r) < 1e-8:
        # second-order series, exact to machine precision at this angle
        hat = skew(x_r)
        return np.eye(3) + hat + 0.5 * hat @ hat
    return Rotation.from_rotvec(x_r).as_matrix()


def log_so3(c: npt.ArrayLike) -> FloatArray:
    """Logarithm map SO(3) → so(3) returned as a rotation vector."""
    return Rotation.from_matrix(np.asarray(c, dtype=np.float64)).as_rotvec()


def project_to_so3(m: npt.ArrayLike) -> FloatArray:
    """
    Nearest rotation to m in Frobenius norm.

    Args:
        m (ArrayLike): 3×3 matrix.

    Returns:
        FloatArray: U diag(1, 1, det(U Vᵀ)) Vᵀ from the SVD of m.

    Raises:
        DegenerateProjection: If the two smallest singular values are both
            below 1e-12 (the projection is not unique).
    """
    arr = as_finite(m, "rotation block")
    u, s, vt = np.linalg.svd(arr)
    if s[1] < 1e-12 and s[2] < 1e-12:
        raise DegenerateProjection(f"singular values {s} too small to project")
    sign = np.sign(np.linalg.det(u @ vt)) or 1.0
    return u @ np.diag([1.0, 1.0, sign]) @ vt


def random_rotation(rng: np.random.Generator) -> FloatArray:
    """Rotation sampled uniformly on SO(3)."""
    return Rotation.random(random_state=rng).as_matrix()


def is_rotation(c: npt.ArrayLike, tol: float = 1e-10) -> bool:
    """True when CᵀC = I and det C = 1 to tolerance."""
    c = np.asarray(c, dtype=np.float64)
    return bool(
        c.shape == (3, 3)
        and np.allclose(c.T @ c, np.eye(3), atol=tol)
        and abs(np.linalg.det(c) - 1.0) <= tol
    )


def rotation_between(a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    """Rotation taking unit direction a onto unit direction b."""
    a = np.asarray(a, float) / np.linalg.norm(a)
    b = np.asarray(b, float) / np.linalg.norm(b)
    axis = np.cross(a, b)
    sin = np.linalg.norm(axis)
    cos = float(a @ b)
    if sin < 1e-12:
        if cos > 0:
            return np.eye(3)
        # antiparallel: half turn about any axis orthogonal to a
        ortho = np.cross(a, [1.0, 0.0, 0.0])
        if np.linalg.norm(ortho) < 1e-6:
            ortho = np.cross(a, [0.0, 1.0, 0.0])
        return exp_so3(np.pi * ortho / np.linalg.norm(ortho))
    return exp_so3(axis / sin * np.arctan2(sin, cos))
