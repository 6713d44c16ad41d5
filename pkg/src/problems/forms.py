"""
Sparse assembly of homogeneous quadratic forms zᵀAz.

Linear forms are dictionaries {index: coefficient}; a quadratic form is
built as a sum of products of linear forms and returned as a symmetric
scipy sparse matrix.
"""

from collections import defaultdict
from typing import Dict, Iterable, List

import numpy as np
import scipy.sparse as sp

LinearForm = Dict[int, float]


def var(index: int, coef: float = 1.0) -> LinearForm:
    return {index: coef}


def combine(*terms: LinearForm, scales: Iterable[float] = ()) -> LinearForm:
    """Linear combination Σ scale_k · term_k (scales default to 1)."""
    scales = list(scales) or [1.0] * len(terms)
    out: Dict[int, float] = defaultdict(float)
    for term, scale in zip(terms, scales):
        for idx, coef in term.items():
            out[idx] += scale * coef
    return {k: v for k, v in out.items() if v != 0.0}


def skew_forms(u: List[LinearForm]) -> List[List[LinearForm]]:
    """Skew matrix of a 3-vector of linear forms."""
    neg = [combine(ui, scales=[-1.0]) for ui in u]
    return [
        [{}, neg[2], u[1]],
        [u[2], {}, neg[0]],
        [neg[1], u[0], {}],
    ]


class QuadraticForm:
    """
    Accumulator for Σ coef · z_i z_j.

    Args:
        n (int): Dimension of z.
    """

    def __init__(self, n: int):
        self.n = n
        self._terms: Dict[tuple, float] = defaultdict(float)

    def add(self, i: int, j: int, coef: float) -> "QuadraticForm":
        if coef != 0.0:
            key = (i, j) if i <= j else (j, i)
            self._terms[key] += coef
        return self

    def add_product(
        self, u: LinearForm, v: LinearForm, coef: float = 1.0
    ) -> "QuadraticForm":
        """Add coef · (uᵀz)(vᵀz)."""
        for i, a in u.items():
            for j, b in v.items():
                self.add(i, j, coef * a * b)
        return self

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self._terms.values())

    def build(self) -> sp.csr_array:
        rows, cols, vals = [], [], []
        for (i, j), coef in self._terms.items():
            if coef == 0.0:
                continue
            if i == j:
                rows.append(i)
                cols.append(i)
                vals.append(coef)
            else:
                rows += [i, j]
                cols += [j, i]
                vals += [0.5 * coef, 0.5 * coef]
        index = (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))
        data = np.array(vals, dtype=np.float64)
        return sp.csr_array((data, index), shape=(self.n, self.n))
