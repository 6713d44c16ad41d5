"""
Tightness metrics of a solved relaxation.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.certificate import corank
from src.errors import ZeroMatrix
from src.linalg import sym_eigvals
from src.sdp.solver import SdpSolution

TIGHT_ER = 1e6


def eigenvalue_ratio(z: npt.ArrayLike) -> float:
    """
    λ₁ / max(λ₂, 1e-16 λ₁) of a PSD matrix.

    Raises:
        ZeroMatrix: If Z has no positive eigenvalue.
    """
    values = sym_eigvals(z)
    if values[0] <= 0.0:
        raise ZeroMatrix("eigenvalue ratio of a zero matrix")
    if values.size == 1:
        return np.inf
    return float(values[0] / max(values[1], 1e-16 * values[0]))


def relative_gap(rounded_cost: float, dual_cost: float) -> float:
    """(p(x_r) − d*) / (1 + d*)."""
    return (rounded_cost - dual_cost) / (1.0 + dual_cost)


def rank_estimate(z: npt.ArrayLike, rel_tol: float = 1.0 / TIGHT_ER) -> int:
    values = sym_eigvals(z)
    return int(np.sum(values > rel_tol * max(values[0], 0.0)))


@dataclass(frozen=True)
class TightnessReport:
    """
    Args:
        er (float): Eigenvalue ratio of Z.
        relative_gap (float): Gap between the rounded cost and the dual cost.
        rank_estimate (int): Eigenvalues of Z above λ₁/1e6.
        corank_h (int): Numerical nullity of H.
    """

    er: float
    relative_gap: float
    rank_estimate: int
    corank_h: int

    @property
    def tight(self) -> bool:
        return self.er >= TIGHT_ER


def tightness_report(solution: SdpSolution, rounded_cost: float) -> TightnessReport:
    return TightnessReport(
        er=eigenvalue_ratio(solution.z_mat),
        relative_gap=relative_gap(rounded_cost, solution.dual_cost),
        rank_estimate=rank_estimate(solution.z_mat),
        corank_h=corank(solution.certificate),
    )
