"""
Homogeneous QCQP container.

    min  zᵀQz   s.t.  zᵀA₀z = 1,  zᵀA_iz = 0  (i = 1..m)

Constraint matrices are kept sparse; Q and A₀ are dense.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from src.linalg import (
    INDEPENDENCE_TOL,
    FloatArray,
    independent_rows,
    svec_sparse_rows,
)
from src.problems.constraints import Constraint
from src.problems.layout import VariableLayout

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QcqpProblem:
    """
    Args:
        q (FloatArray): Symmetric n×n cost matrix.
        constraints (tuple[Constraint, ...]): Annihilating constraints A_i.
        a0 (FloatArray): Homogenizing constraint matrix.
        layout (VariableLayout): Block structure of z.
    """

    q: FloatArray
    constraints: Tuple[Constraint, ...]
    a0: FloatArray
    layout: VariableLayout
    metadata: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=np.float64))
        object.__setattr__(self, "a0", _dense(self.a0))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = self.layout.dim
        if self.q.shape != (n, n) or self.a0.shape != (n, n):
            raise ValueError(f"cost and A0 must be {n}×{n}")
        for c in self.constraints:
            if c.matrix.shape != (n, n):
                raise ValueError(f"constraint {c.tag} has shape {c.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.layout.dim

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    @property
    def n_equalities(self) -> int:
        """Annihilating constraints plus the homogenizing one."""
        return len(self.constraints) + 1

    def matrices(self) -> List[sp.csr_array]:
        return [c.matrix for c in self.constraints]

    def count_by(self, attribute: str = "family") -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for c in self.constraints:
            key = getattr(c, attribute)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def cost(self, z: npt.ArrayLike) -> float:
        z = np.asarray(z, dtype=np.float64)
        return float(z @ self.q @ z)

    def residuals(self, z: npt.ArrayLike) -> FloatArray:
        """zᵀA_iz for every constraint."""
        z = np.asarray(z, dtype=np.float64)
        return np.array([c.evaluate(z) for c in self.constraints])

    def subset(self, indices: Sequence[int]) -> "QcqpProblem":
        """Problem with only the listed constraints, in the given order."""
        return QcqpProblem(
            q=self.q,
            constraints=tuple(self.constraints[i] for i in indices),
            a0=self.a0,
            layout=self.layout,
            metadata=dict(self.metadata),
        )

    def without_redundant(self) -> "QcqpProblem":
        kept = [i for i, c in enumerate(self.constraints) if c.label == "base"]
        return self.subset(kept)


def _dense(m) -> FloatArray:
    if sp.issparse(m):
        return m.toarray()
    return np.asarray(m, dtype=np.float64)


def constraint_rows(problem: QcqpProblem, include_a0: bool = True) -> sp.csr_array:
    """svec of [A₀, A_1, ..., A_m] (A₀ optional) as sparse rows."""
    mats = ([sp.csr_array(problem.a0)] if include_a0 else []) + problem.matrices()
    return svec_sparse_rows(mats, problem.dim)


def prune_dependent_constraints(
    problem: QcqpProblem, tol: float = INDEPENDENCE_TOL
) -> Tuple[QcqpProblem, List[int]]:
    """
    Drop constraints linearly dependent on earlier ones.

    Rows svec(A₀), svec(A_1), ... are scanned in generation order and a
    constraint is kept when its component orthogonal to the kept rows
    exceeds tol relative to its norm.

    Args:
        problem (QcqpProblem): Problem with possibly dependent constraints.
        tol (float, optional): Relative residual threshold, shared with the
            solver independence check.

    Returns:
        tuple[QcqpProblem, list[int]]: Independent subproblem and the indices
            of the kept constraints in the original problem.
    """
    kept_rows = independent_rows(constraint_rows(problem), tol=tol)
    if not kept_rows or kept_rows[0] != 0:
        raise ValueError("homogenizing constraint has zero norm")
    kept = [r - 1 for r in kept_rows[1:]]
    log.info(
        f"Kept {len(kept)} of {problem.n_constraints} constraints "
        f"(dim={problem.dim})"
    )
    return problem.subset(kept), kept


def scatter_multipliers(
    values: npt.ArrayLike, kept: Sequence[int], size: int
) -> FloatArray:
    """Place multipliers of a pruned problem at their original indices."""
    out = np.zeros(size)
    out[np.asarray(kept, dtype=np.int64)] = np.asarray(values, dtype=np.float64)
    return out
