"""
Constraint discovery from the nullspace of lifted feasible samples.

A symmetric A with svec(A) orthogonal to every svec(z zᵀ) satisfies
zᵀAz = 0 on all samples; with enough samples it vanishes on the whole
feasible set.
"""

import logging
from typing import List, Sequence

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from src.errors import InvalidInput, NoConstraintsFound
from src.learning.sampler import FeasibleSampleSet
from src.linalg import FloatArray, smat, svec, sym_eig
from src.problems import (
    Constraint,
    QcqpProblem,
    VariableLayout,
    homogenizing_constraint,
)

log = logging.getLogger(__name__)


def learn_constraints(
    samples: FeasibleSampleSet, threshold: float = 1e-10
) -> List[FloatArray]:
    """
    Orthonormal basis of the annihilating quadratic forms.

    Args:
        samples (FeasibleSampleSet): At least twice as many samples as the
            half-vectorized dimension.
        threshold (float, optional): Gram eigenvalues below
            threshold · λ_max span the nullspace. Defaults to 1e-10.

    Returns:
        list[FloatArray]: Symmetric matrices, orthonormal in the Frobenius
            inner product.

    Raises:
        InvalidInput: If there are too few samples.
        NoConstraintsFound: If the nullspace is trivial.
    """
    rows = samples.rows
    dim = rows.shape[1]
    if samples.count < 2 * dim:
        raise InvalidInput(f"need at least {2 * dim} samples, got {samples.count}")
    gram = rows.T @ rows
    eig = sym_eig(gram)
    null = eig.values <= threshold * eig.values[0]
    if not np.any(null):
        raise NoConstraintsFound(
            f"data matrix of {samples.count} samples has full rank {dim}"
        )
    basis = eig.vectors[:, null]
    log.info(f"Learned {basis.shape[1]} constraints in dimension {dim}")
    return [smat(v) for v in basis.T]


def span_residual(matrix: npt.ArrayLike, learned: Sequence[FloatArray]) -> float:
    """
    Relative distance of a matrix from the span of learned constraints,
    ‖a − PPᵀa‖ / ‖a‖ in svec coordinates.
    """
    a = svec(matrix.toarray() if sp.issparse(matrix) else matrix)
    basis = np.array([svec(m) for m in learned])
    residual = a - basis.T @ (basis @ a)
    return float(np.linalg.norm(residual) / np.linalg.norm(a))


def max_violation(learned: Sequence[FloatArray], lifts: npt.ArrayLike) -> float:
    """max |zᵀAz| / ‖z‖² over learned matrices and held-out lifts."""
    z = np.asarray(lifts, dtype=np.float64)
    norms = np.sum(z * z, axis=1)
    worst = 0.0
    for a in learned:
        values = np.einsum("ki,ij,kj->k", z, a, z)
        worst = max(worst, float(np.max(np.abs(values) / norms)))
    return worst


def as_constraints(learned: Sequence[FloatArray]) -> List[Constraint]:
    """Wrap learned matrices as constraint records."""
    return [
        Constraint(sp.csr_array(a), "learned", "nullspace", f"learned{i}")
        for i, a in enumerate(learned)
    ]


def learned_problem(
    learned: Sequence[FloatArray], layout: VariableLayout
) -> QcqpProblem:
    """Learned constraints packaged as a zero-cost problem for JSON export."""
    return QcqpProblem(
        q=np.zeros((layout.dim, layout.dim)),
        constraints=tuple(as_constraints(learned)),
        a0=homogenizing_constraint(layout).toarray(),
        layout=layout,
        metadata={"kind": "learned"},
    )
