from .closed_form import (
    closed_form_initialization,
    closed_form_wahba,
    slam_initialization,
)
from .gauss_newton import (
    GnOptions,
    GnResult,
    gauss_newton_localize,
    gauss_newton_slam,
    retract,
)
from .hessian import central_difference_hessian, numerical_hessian

__all__ = [
    "GnOptions",
    "GnResult",
    "central_difference_hessian",
    "closed_form_initialization",
    "closed_form_wahba",
    "gauss_newton_localize",
    "gauss_newton_slam",
    "numerical_hessian",
    "retract",
    "slam_initialization",
]
