"""
Error types raised across the estimation toolkit.

Every error derives from CertestError so callers (CLI, HTTP routes, sweep
workers) can catch toolkit failures in one place. Errors caused by bad
caller input additionally derive from ValueError.
"""

from typing import Any, Optional


class CertestError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(CertestError, ValueError):
    """Input contains non-finite values or has the wrong shape."""


class NotPositiveDefinite(CertestError, ValueError):
    """A matrix required to be positive definite is not."""


class DegenerateProjection(CertestError, ValueError):
    """Matrix is too close to rank-deficient to project onto SO(3)."""


class BehindCamera(CertestError, ValueError):
    """Point has non-positive depth in the camera frame."""


class InvalidDisparity(CertestError, ValueError):
    """Stereo disparity is non-positive."""


class DegenerateCovariance(CertestError, ValueError):
    """Covariance is singular where an inverse or condition number is needed."""


class MissingLandmark(CertestError, KeyError):
    """An edge references a landmark with no known position."""


class InvalidWeight(CertestError, ValueError):
    """Edge weights are non-positive or not positive semidefinite."""


class GaugeUnfixed(CertestError, ValueError):
    """A SLAM graph has no prior edge to fix the global frame."""


class InsufficientLandmarks(CertestError, ValueError):
    """Too few landmarks for the requested test."""


class DependentConstraints(CertestError, ValueError):
    """Constraint matrices are linearly dependent as vectors."""


class NumericalFailure(CertestError):
    """
    Interior-point iterations stalled.

    Args:
        message (str): Description of the failure.
        best_iterate (Any, optional): Best solution found before the stall.
    """

    def __init__(self, message: str, best_iterate: Optional[Any] = None):
        super().__init__(message)
        self.best_iterate = best_iterate


class ZeroMatrix(CertestError, ValueError):
    """Eigenvalue ratio requested for a zero matrix."""


class MultiplierMismatch(CertestError, ValueError):
    """Number of multipliers differs from the number of constraints."""


class LineSearchFailure(CertestError):
    """Damped Gauss-Newton steps stopped decreasing the cost."""


class NoConstraintsFound(CertestError):
    """Lifted sample matrix has a trivial nullspace."""


class InvalidWindow(CertestError, ValueError):
    """Median filter window size is not odd and positive."""
