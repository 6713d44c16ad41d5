"""
Dense primal-dual interior-point solver for the Shor relaxation

    min ⟨Q, Z⟩  s.t.  ⟨A₀, Z⟩ = 1,  ⟨A_i, Z⟩ = 0,  Z ⪰ 0

and its dual

    max −ρ  s.t.  H(λ, ρ) = Q + ρA₀ + Σ λ_i A_i ⪰ 0.

Search directions are HKM with Mehrotra predictor-corrector steps; the
Schur complement system is solved densely by Cholesky. Constraint
matrices are normalized to unit Frobenius norm internally.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from time import perf_counter
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from pydantic import BaseModel, ConfigDict, Field

from src.errors import (
    DependentConstraints,
    NotPositiveDefinite,
    NumericalFailure,
)
from src.linalg import (
    INDEPENDENCE_TOL,
    FloatArray,
    as_finite,
    cholesky,
    independent_rows,
    symmetrize,
)
from src.problems import QcqpProblem, constraint_rows

log = logging.getLogger(__name__)


class SolverStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max-iter"
    NUMERICAL_FAILURE = "numerical-failure"


class SolverOptions(BaseModel):
    """
    Interior-point settings.

    Args:
        tol (float): Relative primal, dual and gap tolerance.
        max_iter (int): Iteration cap.
        step_fraction (float): Fraction-to-boundary factor.
        check_independence (bool): Reject dependent constraint sets.
        independence_tol (float): Relative residual threshold of that check.
        stall_iterations (int): Iterations without merit improvement before
            giving up.
    """

    model_config = ConfigDict(extra="forbid")

    tol: float = Field(1e-10, gt=0)
    max_iter: int = Field(1000, ge=1)
    step_fraction: float = Field(0.98, gt=0, lt=1)
    check_independence: bool = True
    independence_tol: float = Field(INDEPENDENCE_TOL, gt=0)
    stall_iterations: int = Field(30, ge=1)


@dataclass(frozen=True)
class KktReport:
    """
    Relative KKT residuals of a returned solution.

    Args:
        primal_infeasibility (float): ‖A(Z) − b‖ / (1 + ‖b‖), normalized A_i.
        dual_infeasibility (float): max(0, −λ_min(H)) / (1 + ‖Q‖_F).
        complementarity (float): |⟨H, Z⟩| / max(1, ‖H‖_F ‖Z‖_F).
        relative_gap (float): |p − d| / (1 + |p| + |d|).
    """

    primal_infeasibility: float
    dual_infeasibility: float
    complementarity: float
    relative_gap: float

    def max_residual(self) -> float:
        return max(
            self.primal_infeasibility,
            self.dual_infeasibility,
            self.complementarity,
            self.relative_gap,
        )


@dataclass(frozen=True)
class SdpSolution:
    """
    Primal-dual pair returned by solve_sdp.

    Args:
        z_mat (FloatArray): Primal matrix Z.
        multipliers (FloatArray): λ_i, one per constraint of the solved problem.
        rho (float): Multiplier of the homogenizing constraint.
        certificate (FloatArray): H = Q + ρA₀ + Σλ_iA_i.
        primal_cost (float): ⟨Q, Z⟩.
        dual_cost (float): −ρ.
        kkt (KktReport): Residual report.
        iterations (int): Interior-point iterations taken.
        status (SolverStatus): Termination status.
        solve_time (float): Wall time in seconds.
    """

    z_mat: FloatArray
    multipliers: FloatArray
    rho: float
    certificate: FloatArray
    primal_cost: float
    dual_cost: float
    kkt: KktReport
    iterations: int
    status: SolverStatus
    solve_time: float = field(default=0.0, compare=False)

    def summary(self) -> dict:
        return {
            "status": self.status.value,
            "primal_cost": self.primal_cost,
            "dual_cost": self.dual_cost,
            "iterations": self.iterations,
            "solve_time": self.solve_time,
            "kkt": {
                "primal_infeasibility": self.kkt.primal_infeasibility,
                "dual_infeasibility": self.kkt.dual_infeasibility,
                "complementarity": self.kkt.complementarity,
                "relative_gap": self.kkt.relative_gap,
            },
        }


def require_independent(
    problem: QcqpProblem, tol: float = INDEPENDENCE_TOL
) -> None:
    """
    Raises:
        DependentConstraints: If svec(A₀), svec(A_i) are linearly dependent.
    """
    kept = independent_rows(constraint_rows(problem), tol=tol)
    if len(kept) != problem.n_equalities:
        dropped = sorted(set(range(problem.n_equalities)) - set(kept))[:5]
        raise DependentConstraints(
            f"{problem.n_equalities - len(kept)} of {problem.n_equalities} "
            f"equalities are dependent (first rows {dropped})"
        )


class _Operator:
    """Normalized constraint operator A: S^n → R^m and its adjoint."""

    def __init__(self, mats: List[sp.csr_array], n: int):
        self.n = n
        self.norms = np.array([spla.norm(a) for a in mats])
        rows, cols, vals = [], [], []
        self.row_support: List[np.ndarray] = []
        self.row_blocks: List[np.ndarray] = []
        for r, (a, scale) in enumerate(zip(mats, self.norms)):
            coo = sp.coo_array(a)
            rows.append(np.full(coo.nnz, r, dtype=np.int64))
            cols.append(coo.row.astype(np.int64) * n + coo.col.astype(np.int64))
            vals.append(coo.data / scale)
            support = np.unique(coo.row)
            self.row_support.append(support)
            self.row_blocks.append(sp.csr_array(a)[support, :].toarray() / scale)
        self.matrix = sp.csr_array(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(len(mats), n * n),
        )

    def apply(self, x: FloatArray) -> FloatArray:
        return self.matrix @ x.ravel()

    def adjoint(self, y: FloatArray) -> FloatArray:
        return (self.matrix.T @ y).reshape(self.n, self.n)

    def schur(self, x: FloatArray, s_inv: FloatArray) -> FloatArray:
        """M_ij = tr(A_i X A_j S⁻¹)."""
        m = len(self.row_blocks)
        out = np.empty((m, m))
        for j, (support, block) in enumerate(zip(self.row_support, self.row_blocks)):
            y = x[:, support] @ (block @ s_inv)
            out[:, j] = self.apply(y)
        return symmetrize(out)


def _max_step(factor: FloatArray, direction: FloatArray) -> float:
    """Largest α with R Rᵀ + αD ⪰ 0."""
    left = scipy.linalg.solve_triangular(factor, direction, lower=True)
    scaled = scipy.linalg.solve_triangular(factor, left.T, lower=True)
    lam_min = np.linalg.eigvalsh(symmetrize(scaled))[0]
    return np.inf if lam_min >= 0 else -1.0 / lam_min


def _factor(m: FloatArray, retries: int = 3) -> FloatArray:
    shift = 1e-14 * max(1.0, float(np.max(np.abs(np.diag(m)))))
    for attempt in range(retries + 1):
        try:
            if attempt == 0:
                return cholesky(m)
            return cholesky(m + shift * np.eye(m.shape[0]))
        except NotPositiveDefinite:
            if attempt > 0:
                shift *= 100.0
    raise NotPositiveDefinite("matrix not positive definite after regularization")


@dataclass
class _Iterate:
    x: FloatArray
    y: FloatArray
    s: FloatArray
    iteration: int
    merit: float


def solve_sdp(
    problem: QcqpProblem, options: Optional[SolverOptions] = None
) -> SdpSolution:
    """
    Solve the SDP relaxation of a homogeneous QCQP.

    Args:
        problem (QcqpProblem): Problem with linearly independent constraints.
        options (SolverOptions, optional): Solver settings.

    Returns:
        SdpSolution: Status OPTIMAL when all relative residuals are below
            tol, MAX_ITER when the iteration cap is hit first.

    Raises:
        DependentConstraints: If the constraint set is linearly dependent.
        NumericalFailure: If the iterations stall; carries the best iterate
            as an SdpSolution with status NUMERICAL_FAILURE.
    """
    options = options or SolverOptions()
    start = perf_counter()
    if options.check_independence:
        require_independent(problem, options.independence_tol)
    n = problem.dim
    c = as_finite(problem.q, "cost matrix")
    mats = [sp.csr_array(problem.a0)] + problem.matrices()
    op = _Operator(mats, n)
    m = len(mats)
    b = np.zeros(m)
    b[0] = 1.0 / op.norms[0]
    norm_b, norm_c = np.linalg.norm(b), np.linalg.norm(c)

    xi = max(10.0, np.sqrt(n), n * (1.0 + np.max(np.abs(b))) / 2.0)
    eta = max(10.0, np.sqrt(n), 1.0 + norm_c)
    x, s, y = xi * np.eye(n), eta * np.eye(n), np.zeros(m)

    best: Optional[_Iterate] = None
    since_best = 0
    status = SolverStatus.MAX_ITER
    iteration = 0
    failure = ""
    for iteration in range(options.max_iter + 1):
        r_p = b - op.apply(x)
        r_d = c - op.adjoint(y) - s
        pobj, dobj = float(np.sum(c * x)), float(b @ y)
        rel_p = np.linalg.norm(r_p) / (1.0 + norm_b)
        rel_d = np.linalg.norm(r_d) / (1.0 + norm_c)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        merit = max(rel_p, rel_d, gap)
        log.debug(
            f"it={iteration} p={pobj:.6e} d={dobj:.6e} "
            f"rp={rel_p:.1e} rd={rel_d:.1e} gap={gap:.1e}"
        )
        if best is None or merit < 0.5 * best.merit:
            since_best = 0
        else:
            since_best += 1
        if best is None or merit < best.merit:
            best = _Iterate(x.copy(), y.copy(), s.copy(), iteration, merit)
        if merit <= options.tol:
            status = SolverStatus.OPTIMAL
            break
        if iteration == options.max_iter:
            break
        if since_best >= options.stall_iterations:
            failure = f"no progress in {since_best} iterations"
            break
        try:
            x, y, s = _step(op, c, b, x, y, s, r_p, r_d, options.step_fraction)
        except NotPositiveDefinite as e:
            failure = f"factorization failed: {e}"
            break
    elapsed = perf_counter() - start

    if failure:
        sol = _package(problem, op, best, SolverStatus.NUMERICAL_FAILURE, elapsed)
        log.warning(
            f"[metric:sdp.solve] n={n} m={m} iterations={iteration} "
            f"status=numerical-failure {elapsed:.2f}s ({failure})"
        )
        raise NumericalFailure(f"interior point stalled: {failure}", sol)
    final = _Iterate(x, y, s, iteration, 0.0)
    if status == SolverStatus.MAX_ITER:
        final = best
    sol = _package(problem, op, final, status, elapsed)
    log.info(
        f"[metric:sdp.solve] n={n} m={m} iterations={sol.iterations} "
        f"status={status.value} {elapsed:.2f}s"
    )
    return sol


def _step(
    op: _Operator,
    c: FloatArray,
    b: FloatArray,
    x: FloatArray,
    y: FloatArray,
    s: FloatArray,
    r_p: FloatArray,
    r_d: FloatArray,
    fraction: float,
) -> Tuple[FloatArray, FloatArray, FloatArray]:
    n = x.shape[0]
    x_factor, s_factor = _factor(x), _factor(s)
    s_inv = scipy.linalg.cho_solve((s_factor, True), np.eye(n))
    schur_factor = _factor(op.schur(x, s_inv))
    mu = float(np.sum(x * s)) / n

    def direction(target: float, corrector: Optional[FloatArray]):
        rhs_mat = target * s_inv - x - x @ r_d @ s_inv
        if corrector is not None:
            rhs_mat = rhs_mat - corrector @ s_inv
        rhs = r_p - op.apply(rhs_mat)
        dy = scipy.linalg.cho_solve((schur_factor, True), rhs)
        ds = symmetrize(r_d - op.adjoint(dy))
        dx = target * s_inv - x - x @ ds @ s_inv
        if corrector is not None:
            dx = dx - corrector @ s_inv
        return symmetrize(dx), dy, ds

    def lengths(dx, ds):
        alpha_p = min(1.0, fraction * _max_step(x_factor, dx))
        alpha_d = min(1.0, fraction * _max_step(s_factor, ds))
        return alpha_p, alpha_d

    dx, dy, ds = direction(0.0, None)
    alpha_p, alpha_d = lengths(dx, ds)
    mu_aff = float(np.sum((x + alpha_p * dx) * (s + alpha_d * ds))) / n
    sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0

    dx, dy, ds = direction(sigma * mu, dx @ ds)
    alpha_p, alpha_d = lengths(dx, ds)
    return x + alpha_p * dx, y + alpha_d * dy, s + alpha_d * ds


def _package(
    problem: QcqpProblem,
    op: _Operator,
    it: _Iterate,
    status: SolverStatus,
    elapsed: float,
) -> SdpSolution:
    y = it.y / op.norms
    rho = -float(y[0])
    multipliers = -y[1:]
    h = problem.q - op.adjoint(it.y)
    h = symmetrize(h)
    z = symmetrize(it.x)
    primal = float(np.sum(problem.q * z))
    dual = -rho
    b = np.zeros(len(op.norms))
    b[0] = 1.0 / op.norms[0]
    primal_inf = np.linalg.norm(b - op.apply(z)) / (1.0 + np.linalg.norm(b))
    lam_min = float(np.linalg.eigvalsh(h)[0])
    dual_inf = max(0.0, -lam_min) / (1.0 + np.linalg.norm(problem.q))
    comp = abs(float(np.sum(h * z))) / max(
        1.0, float(np.linalg.norm(h) * np.linalg.norm(z))
    )
    gap = abs(primal - dual) / (1.0 + abs(primal) + abs(dual))
    return SdpSolution(
        z_mat=z,
        multipliers=multipliers,
        rho=rho,
        certificate=h,
        primal_cost=primal,
        dual_cost=dual,
        kkt=KktReport(primal_inf, dual_inf, comp, gap),
        iterations=it.iteration,
        status=status,
        solve_time=elapsed,
    )
