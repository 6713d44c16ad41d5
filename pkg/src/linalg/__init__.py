from .dense import (
    INDEPENDENCE_TOL,
    EigDecomposition,
    FloatArray,
    as_finite,
    cholesky,
    independent_rows,
    kron,
    lifted_outer,
    smat,
    solve_spd,
    svec,
    svec_batch,
    svec_sparse_rows,
    sym_eig,
    sym_eigvals,
    symmetrize,
    unvec,
    vec,
)

__all__ = [
    "INDEPENDENCE_TOL",
    "EigDecomposition",
    "FloatArray",
    "as_finite",
    "cholesky",
    "independent_rows",
    "kron",
    "lifted_outer",
    "smat",
    "solve_spd",
    "svec",
    "svec_batch",
    "svec_sparse_rows",
    "sym_eig",
    "sym_eigvals",
    "symmetrize",
    "unvec",
    "vec",
]
