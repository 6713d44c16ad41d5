"""
Certificate-side analysis.

The certificate H = Q + ρA₀ + Σλ_iA_i of a tight relaxation, contracted
with the Jacobian L of the lift map z(x) at the solution, gives the Fisher
information LᵀHL of the tangent-space parameterization x.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.errors import MultiplierMismatch
from src.geometry import VEC_GENERATORS, Pose
from src.linalg import FloatArray, kron, sym_eigvals, symmetrize
from src.problems import QcqpProblem, VariableLayout, localization_layout

log = logging.getLogger(__name__)


def assemble_certificate(
    problem: QcqpProblem, multipliers: npt.ArrayLike, rho: float
) -> FloatArray:
    """
    H = Q + ρA₀ + Σ λ_i A_i.

    Args:
        problem (QcqpProblem): The QCQP.
        multipliers (ArrayLike): One λ per constraint.
        rho (float): Homogenizing multiplier.

    Raises:
        MultiplierMismatch: If len(multipliers) != number of constraints.
    """
    lam = np.asarray(multipliers, dtype=np.float64).ravel()
    if lam.size != problem.n_constraints:
        raise MultiplierMismatch(
            f"{lam.size} multipliers for {problem.n_constraints} constraints"
        )
    h = problem.q + rho * problem.a0
    for value, c in zip(lam, problem.constraints):
        if value != 0.0:
            h = h + value * c.matrix.toarray()
    return symmetrize(h)


def corank(
    h: npt.ArrayLike, rel_tol: float = 1e-8, abs_floor: float = 1e-12
) -> int:
    """Number of eigenvalues below max(rel_tol · λ_max, abs_floor)."""
    values = sym_eigvals(h)
    threshold = max(rel_tol * max(values[0], 0.0), abs_floor)
    return int(np.sum(values < threshold))


@dataclass(frozen=True)
class MappingJacobian:
    """
    Jacobian of the lift z(x) at x = 0 for left-perturbed poses.

    Args:
        matrix (FloatArray): n × 6N matrix L.
        blocks (list[str]): Tangent coordinate tags, e.g. "r0", "t0".
    """

    matrix: FloatArray
    blocks: List[str]

    @property
    def s_min(self) -> float:
        return float(np.linalg.svd(self.matrix, compute_uv=False)[-1])


def wahba_mapping_jacobian(
    poses: Sequence[Pose], layout: Optional[VariableLayout] = None
) -> MappingJacobian:
    """
    Block-diagonal L with rotation block ∂vec(exp(x^)C̄)/∂x = (C̄ᵀ ⊗ I) Ḡ,
    translation block I and a zero homogenizing row.

    Args:
        poses (Sequence[Pose]): Linearization point.
        layout (VariableLayout, optional): Localization layout.

    Returns:
        MappingJacobian: n × 6N Jacobian.
    """
    layout = layout or localization_layout(len(poses))
    out = np.zeros((layout.dim, 6 * len(poses)))
    tags: List[str] = []
    for i, pose in enumerate(poses):
        rot = kron(pose.rotation.T, np.eye(3)) @ VEC_GENERATORS
        out[layout.slice(f"c{i}"), 6 * i : 6 * i + 3] = rot
        out[layout.slice(f"t{i}"), 6 * i + 3 : 6 * i + 6] = np.eye(3)
        tags += [f"r{i}", f"t{i}"]
    return MappingJacobian(matrix=out, blocks=tags)


@dataclass(frozen=True)
class FisherReport:
    """
    Fisher information recovered from a certificate.

    Args:
        fim (FloatArray): Σ⁻¹ = LᵀHL.
        covariance (FloatArray | None): Σ when the FIM is positive definite.
        min_eig_fim (float): λ_min(Σ⁻¹).
        min_eig_hbar (float): λ_min of H without the homogenizing row/column.
        s_min (float): Smallest singular value of L.
        bound_slack (float): λ_min(Σ⁻¹)/s_min² − λ_min(H̄), non-negative.
        second_eig_h (float): Second smallest eigenvalue of H.
    """

    fim: FloatArray
    covariance: Optional[FloatArray]
    min_eig_fim: float
    min_eig_hbar: float
    s_min: float
    bound_slack: float
    second_eig_h: float

    def summary(self) -> dict:
        return {
            "fim": self.fim.tolist(),
            "covariance": None if self.covariance is None else self.covariance.tolist(),
            "min_eig_fim": self.min_eig_fim,
            "min_eig_hbar": self.min_eig_hbar,
            "s_min": self.s_min,
            "bound_slack": self.bound_slack,
            "second_eig_h": self.second_eig_h,
        }


def fim_from_certificate(
    h: npt.ArrayLike, jacobian: MappingJacobian, pd_tol: float = 1e-12
) -> FisherReport:
    """
    Fisher information LᵀHL and the eigenvalue bound
    λ_min(H̄) ≤ λ_min(Σ⁻¹)/s_min(L)².

    Args:
        h (ArrayLike): Certificate matrix, homogenizing variable last.
        jacobian (MappingJacobian): Lift Jacobian at the solution.
        pd_tol (float, optional): Relative eigenvalue floor for inversion.
    """
    h = symmetrize(np.asarray(h, dtype=np.float64))
    lmat = jacobian.matrix
    if lmat.shape[0] != h.shape[0]:
        raise ValueError(f"L has {lmat.shape[0]} rows, H is {h.shape[0]}×{h.shape[0]}")
    fim = symmetrize(lmat.T @ h @ lmat)
    fim_eigs = sym_eigvals(fim)
    covariance = None
    if fim_eigs[-1] > pd_tol * max(abs(fim_eigs[0]), 1.0):
        covariance = symmetrize(np.linalg.inv(fim))
    h_eigs = sym_eigvals(h)
    hbar_min = float(sym_eigvals(h[:-1, :-1])[-1])
    s_min = jacobian.s_min
    slack = float(fim_eigs[-1]) / s_min**2 - hbar_min
    log.debug(
        f"FIM min eig {fim_eigs[-1]:.3e}, H second eig {h_eigs[-2]:.3e}, "
        f"bound slack {slack:.3e}"
    )
    return FisherReport(
        fim=fim,
        covariance=covariance,
        min_eig_fim=float(fim_eigs[-1]),
        min_eig_hbar=hbar_min,
        s_min=s_min,
        bound_slack=slack,
        second_eig_h=float(h_eigs[-2]),
    )
