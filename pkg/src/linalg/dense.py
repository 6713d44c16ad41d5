"""
Dense real linear algebra helpers.

Thin validated wrappers over numpy/scipy LAPACK routines: symmetric
eigendecomposition sorted in descending order, Cholesky factorization with
a typed failure, Kronecker products, column-major vectorization and the
scaled half-vectorization used for Gram-rank tests and constraint learning.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.sparse as sp

from src.errors import InvalidInput, NotPositiveDefinite

FloatArray = npt.NDArray[np.float64]

SQRT2 = np.sqrt(2.0)

# relative residual below which a row counts as linearly dependent
INDEPENDENCE_TOL = 1e-9


@dataclass(frozen=True)
class EigDecomposition:
    """
    Eigendecomposition of a symmetric matrix.

    Args:
        values (FloatArray): Eigenvalues sorted in descending order.
        vectors (FloatArray): Orthonormal eigenvectors stored as columns.
    """

    values: FloatArray
    vectors: FloatArray

    def reconstruct(self) -> FloatArray:
        """Return V diag(values) Vᵀ."""
        return (self.vectors * self.values) @ self.vectors.T


def as_finite(m: npt.ArrayLike, name: str = "matrix") -> FloatArray:
    """
    Convert input to a float array and reject NaN/inf entries.

    Args:
        m (ArrayLike): Input values.
        name (str, optional): Name used in the error message.

    Returns:
        FloatArray: The input as float64.

    Raises:
        InvalidInput: If any entry is not finite.
    """
    arr = np.asarray(m, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return arr


def symmetrize(m: npt.ArrayLike) -> FloatArray:
    """Return (M + Mᵀ)/2."""
    arr = np.asarray(m, dtype=np.float64)
    return 0.5 * (arr + arr.T)


def sym_eig(m: npt.ArrayLike) -> EigDecomposition:
    """
    Eigendecomposition of a symmetric matrix, values sorted descending.

    Equal eigenvalues keep the order returned by LAPACK, so output is
    deterministic for identical input.

    Args:
        m (ArrayLike): Square symmetric matrix.

    Returns:
        EigDecomposition: Sorted eigenvalues and eigenvectors.

    Raises:
        InvalidInput: If m is not square or contains non-finite entries.
    """
    arr = as_finite(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {arr.shape}")
    values, vectors = np.linalg.eigh(symmetrize(arr))
    order = np.argsort(-values, kind="stable")
    return EigDecomposition(values=values[order], vectors=vectors[:, order])


def sym_eigvals(m: npt.ArrayLike) -> FloatArray:
    """Eigenvalues of a symmetric matrix in descending order."""
    arr = as_finite(m)
    return np.linalg.eigvalsh(symmetrize(arr))[::-1]


def cholesky(m: npt.ArrayLike) -> FloatArray:
    """
    Lower-triangular Cholesky factor L with L Lᵀ = M.

    Args:
        m (ArrayLike): Symmetric positive definite matrix.

    Returns:
        FloatArray: Lower-triangular factor.

    Raises:
        NotPositiveDefinite: If a non-positive pivot is encountered.
    """
    arr = as_finite(m)
    try:
        return scipy.linalg.cholesky(symmetrize(arr), lower=True)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(str(e)) from e


def solve_spd(m: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    """Solve M x = b for symmetric positive definite M via Cholesky."""
    factor = cholesky(m)
    y = scipy.linalg.solve_triangular(factor, np.asarray(b, float), lower=True)
    return scipy.linalg.solve_triangular(factor.T, y, lower=False)


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    """Kronecker product a ⊗ b."""
    return np.kron(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))


def vec(m: npt.ArrayLike) -> FloatArray:
    """Column-major vectorization: vec(m)[i + j*rows] = m[i, j]."""
    return np.asarray(m, dtype=np.float64).reshape(-1, order="F")


def unvec(v: npt.ArrayLike, rows: int, cols: int) -> FloatArray:
    """Inverse of vec for a rows × cols matrix."""
    return np.asarray(v, dtype=np.float64).reshape((rows, cols), order="F")


def svec(m: npt.ArrayLike) -> FloatArray:
    """
    Half-vectorization of a symmetric matrix with √2 off-diagonal scaling.

    Euclidean inner products of svec vectors equal Frobenius inner products
    of the matrices. Entries are ordered row by row over the upper triangle.
    """
    arr = np.asarray(m, dtype=np.float64)
    rows, cols = np.triu_indices(arr.shape[0])
    scale = np.where(rows == cols, 1.0, SQRT2)
    return arr[rows, cols] * scale


def svec_batch(ms: npt.ArrayLike) -> FloatArray:
    """svec applied to a stack of symmetric matrices of shape (k, n, n)."""
    arr = np.asarray(ms, dtype=np.float64)
    rows, cols = np.triu_indices(arr.shape[-1])
    scale = np.where(rows == cols, 1.0, SQRT2)
    return arr[..., rows, cols] * scale


def smat(v: npt.ArrayLike) -> FloatArray:
    """Inverse of svec."""
    v = np.asarray(v, dtype=np.float64)
    n = int(round((np.sqrt(8 * v.size + 1) - 1) / 2))
    if n * (n + 1) // 2 != v.size:
        raise InvalidInput(f"length {v.size} is not a triangular number")
    rows, cols = np.triu_indices(n)
    scale = np.where(rows == cols, 1.0, 1.0 / SQRT2)
    out = np.zeros((n, n))
    out[rows, cols] = v * scale
    out[cols, rows] = v * scale
    return out


def lifted_outer(z: npt.ArrayLike) -> FloatArray:
    """svec(z zᵀ) for a vector z."""
    z = np.asarray(z, dtype=np.float64)
    return svec(np.outer(z, z))


def independent_rows(
    vectors: npt.ArrayLike, tol: float = INDEPENDENCE_TOL, chunk: int = 256
) -> list[int]:
    """
    Greedy generation-order selection of linearly independent rows.

    A row is kept when its component orthogonal to the rows kept so far has
    norm above tol times its own norm. Rows are processed in chunks: each
    chunk is first projected against the current basis, then scanned one
    row at a time.

    Args:
        vectors (ArrayLike): Dense or scipy sparse matrix whose rows are
            tested in order.
        tol (float, optional): Relative residual threshold.
        chunk (int, optional): Rows projected together. Defaults to 256.

    Returns:
        list[int]: Indices of kept rows in increasing order.
    """
    if sp.issparse(vectors):
        rows = sp.csr_array(vectors)
    else:
        rows = np.asarray(vectors, dtype=np.float64)
    kept: list[int] = []
    basis = np.zeros((0, rows.shape[1]))
    for start in range(0, rows.shape[0], chunk):
        block = rows[start : start + chunk]
        if sp.issparse(block):
            block = block.toarray()
        norms = np.linalg.norm(block, axis=1)
        # block Gram-Schmidt against the kept basis, applied twice
        residual = block - (block @ basis.T) @ basis
        residual = residual - (residual @ basis.T) @ basis
        new_basis = np.zeros((0, rows.shape[1]))
        for offset, r in enumerate(residual):
            if norms[offset] == 0.0:
                continue
            r = r - new_basis.T @ (new_basis @ r)
            r = r - new_basis.T @ (new_basis @ r)
            size = np.linalg.norm(r)
            if size > tol * norms[offset]:
                new_basis = np.vstack([new_basis, r / size])
                kept.append(start + offset)
        basis = np.vstack([basis, new_basis])
    return kept


def svec_sparse_rows(mats: list, n: int) -> sp.csr_array:
    """
    Stack svec of sparse symmetric n×n matrices as rows of a sparse matrix.

    Args:
        mats (list): scipy sparse (or dense) symmetric matrices.
        n (int): Matrix dimension.

    Returns:
        sp.csr_array: Shape (len(mats), n(n+1)/2).
    """
    rows, cols, vals = [], [], []
    for r, mat in enumerate(mats):
        upper = sp.triu(sp.coo_array(mat)).tocoo()
        i, j = upper.row.astype(np.int64), upper.col.astype(np.int64)
        idx = i * n - i * (i - 1) // 2 + (j - i)
        scale = np.where(i == j, 1.0, SQRT2)
        rows.append(np.full(idx.size, r, dtype=np.int64))
        cols.append(idx)
        vals.append(upper.data * scale)
    if not mats:
        return sp.csr_array((0, n * (n + 1) // 2))
    return sp.csr_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(mats), n * (n + 1) // 2),
    )
