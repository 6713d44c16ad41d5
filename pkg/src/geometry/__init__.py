from .pose import Pose, TangentVector
from .so3 import (
    GENERATORS,
    VEC_GENERATORS,
    exp_so3,
    is_rotation,
    log_so3,
    project_to_so3,
    random_rotation,
    rotation_between,
    skew,
)

__all__ = [
    "GENERATORS",
    "VEC_GENERATORS",
    "Pose",
    "TangentVector",
    "exp_so3",
    "is_rotation",
    "log_so3",
    "project_to_so3",
    "random_rotation",
    "rotation_between",
    "skew",
]
