"""
Gauss-Newton with Levenberg damping on the tangent-space parameterization.

Poses are perturbed on the left, C ← exp(φ^) C and t ← t + δt; world
landmarks (SLAM) are updated additively. The cost is the factor sum
Σ eᵀWe, identical to graph_objective.
"""

import logging
from dataclasses import dataclass, field
from time import perf_counter
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from src.errors import LineSearchFailure
from src.geometry import GENERATORS, Pose, TangentVector, skew
from src.linalg import FloatArray, solve_spd, sym_eig, vec
from src.problems import Estimate, MeasurementGraph

log = logging.getLogger(__name__)


class GnOptions(BaseModel):
    """
    Args:
        rel_tol (float): Stop when an accepted step changes the cost by less
            than rel_tol · cost + abs_tol.
        abs_tol (float): Absolute part of that test.
        grad_tol (float): Convergence when ‖∇J‖ ≤ grad_tol · (1 + J).
        max_iter (int): Iteration cap.
        damping (float): Initial and minimum Levenberg factor, relative to the
            mean diagonal of JᵀJ.
        max_rejections (int): Consecutive rejected steps before giving up.
    """

    model_config = ConfigDict(extra="forbid")

    rel_tol: float = Field(1e-10, gt=0)
    abs_tol: float = Field(1e-10, gt=0)
    grad_tol: float = Field(1e-6, gt=0)
    max_iter: int = Field(200, ge=1)
    damping: float = Field(1e-8, gt=0)
    max_rejections: int = Field(30, ge=1)


@dataclass(frozen=True)
class GnResult:
    """
    Args:
        poses (tuple[Pose, ...]): Final poses.
        landmarks (FloatArray | None): Final world landmarks (SLAM).
        final_cost (float): Σ eᵀWe at the final estimate.
        grad_norm (float): Norm of the cost gradient in tangent coordinates.
        iterations (int): Accepted steps.
        converged (bool): grad_norm ≤ grad_tol · (1 + final_cost).
        cost_history (list[float]): Cost after each accepted step.
    """

    poses: Tuple[Pose, ...]
    landmarks: Optional[FloatArray]
    final_cost: float
    grad_norm: float
    iterations: int
    converged: bool
    cost_history: List[float] = field(default_factory=list)

    @property
    def estimate(self) -> Estimate:
        return Estimate(poses=self.poses, landmarks=self.landmarks)


def _sqrt_psd(w: FloatArray) -> FloatArray:
    """Symmetric square root of a PSD matrix, negative eigenvalues clipped."""
    eig = sym_eig(w)
    return (eig.vectors * np.sqrt(np.clip(eig.values, 0.0, None))) @ eig.vectors.T


def retract(
    poses: Sequence[Pose],
    landmarks: Optional[FloatArray],
    delta: npt.ArrayLike,
) -> Tuple[List[Pose], Optional[FloatArray]]:
    """Apply a stacked tangent step [x_0, ..., x_{N-1}, δm_0, ...]."""
    delta = np.asarray(delta, dtype=np.float64)
    n = len(poses)
    new_poses = [
        pose.retract(TangentVector.from_array(delta[6 * i : 6 * i + 6]))
        for i, pose in enumerate(poses)
    ]
    new_landmarks = None
    if landmarks is not None:
        new_landmarks = landmarks + delta[6 * n :].reshape(-1, 3)
    return new_poses, new_landmarks


class _LeastSquares:
    """Whitened residuals and Jacobians of a measurement graph."""

    def __init__(self, graph: MeasurementGraph, slam: bool):
        self.graph = graph
        self.slam = slam
        self.n_params = 6 * graph.n_poses + (3 * graph.n_landmarks if slam else 0)
        self.sqrt_weights = [_sqrt_psd(e.weight) for e in graph.landmark_edges]

    def _landmark(self, k: int, landmarks: Optional[FloatArray]) -> FloatArray:
        if self.slam:
            return landmarks[k]
        return self.graph.landmark(k)

    def linearize(
        self, poses: Sequence[Pose], landmarks: Optional[FloatArray]
    ) -> Tuple[FloatArray, FloatArray]:
        rows: List[FloatArray] = []
        blocks: List[FloatArray] = []
        for e, sw in zip(self.graph.landmark_edges, self.sqrt_weights):
            pose = poses[e.pose]
            m = self._landmark(e.landmark, landmarks)
            cm = pose.rotation @ m
            jac = np.zeros((3, self.n_params))
            p = 6 * e.pose
            jac[:, p : p + 3] = skew(cm)
            jac[:, p + 3 : p + 6] = np.eye(3)
            if self.slam:
                q = 6 * self.graph.n_poses + 3 * e.landmark
                jac[:, q : q + 3] = -pose.rotation
            rows.append(sw @ (e.measurement - (cm - pose.translation)))
            blocks.append(sw @ jac)
        for e in self.graph.relpose_edges:
            r, j = self._relpose(poses, e.measurement, e.j, e.i, e.sigma, e.tau)
            rows.append(r)
            blocks.append(j)
        for e in self.graph.prior_edges:
            r, j = self._relpose(poses, e.measurement, e.pose, None, e.sigma, e.tau)
            rows.append(r)
            blocks.append(j)
        if not rows:
            return np.zeros(0), np.zeros((0, self.n_params))
        return np.concatenate(rows), np.vstack(blocks)

    def _relpose(self, poses, measurement: Pose, j: int, i, sigma, tau):
        c_m, t_m = measurement.rotation, measurement.translation
        c_j, t_j = poses[j].rotation, poses[j].translation
        jac = np.zeros((12, self.n_params))
        pj = 6 * j
        for k, g in enumerate(GENERATORS):
            jac[:9, pj + k] = vec(c_m @ g @ c_j) / sigma
        jac[9:, pj + 3 : pj + 6] = -c_m / tau
        if i is None:
            rot = c_m @ c_j - np.eye(3)
            trans = -c_m @ t_j - t_m
        else:
            c_i, t_i = poses[i].rotation, poses[i].translation
            rot = c_m @ c_j - c_i
            trans = t_i - c_m @ t_j - t_m
            pi = 6 * i
            for k, g in enumerate(GENERATORS):
                jac[:9, pi + k] = -vec(g @ c_i) / sigma
            jac[9:, pi + 3 : pi + 6] = np.eye(3) / tau
        r = np.concatenate([vec(rot) / sigma, trans / tau])
        return r, jac


def _optimize(
    problem: _LeastSquares,
    poses: Sequence[Pose],
    landmarks: Optional[FloatArray],
    options: GnOptions,
) -> GnResult:
    start = perf_counter()
    poses = list(poses)
    r, jac = problem.linearize(poses, landmarks)
    cost = float(r @ r)
    history = [cost]
    lam = None
    iterations = 0
    rejections = 0
    grad_norm = float(2.0 * np.linalg.norm(jac.T @ r))
    while iterations < options.max_iter:
        grad = jac.T @ r
        grad_norm = float(2.0 * np.linalg.norm(grad))
        if grad_norm <= options.grad_tol * (1.0 + cost):
            break
        normal = jac.T @ jac
        scale = max(1.0, float(np.mean(np.diag(normal))))
        floor = options.damping * scale
        lam = floor if lam is None else max(lam, floor)
        step = solve_spd(normal + lam * np.eye(problem.n_params), -grad)
        cand_poses, cand_landmarks = retract(poses, landmarks, step)
        cand_r, cand_jac = problem.linearize(cand_poses, cand_landmarks)
        cand_cost = float(cand_r @ cand_r)
        if cand_cost <= cost:
            change = cost - cand_cost
            poses, landmarks, r, jac = cand_poses, cand_landmarks, cand_r, cand_jac
            cost = cand_cost
            history.append(cost)
            iterations += 1
            rejections = 0
            lam = max(lam / 10.0, floor)
            log.debug(f"GN it={iterations} cost={cost:.6e} lambda={lam:.1e}")
            if change <= options.rel_tol * cost + options.abs_tol:
                grad_norm = float(2.0 * np.linalg.norm(jac.T @ r))
                break
        else:
            rejections += 1
            lam *= 10.0
            if rejections > options.max_rejections:
                raise LineSearchFailure(
                    f"{rejections} consecutive rejected steps at cost {cost:.6e}, "
                    f"gradient norm {grad_norm:.3e}"
                )
    converged = grad_norm <= options.grad_tol * (1.0 + cost)
    log.info(
        f"[metric:gn.solve] params={problem.n_params} iterations={iterations} "
        f"cost={cost:.6e} converged={converged} {perf_counter() - start:.2f}s"
    )
    return GnResult(
        poses=tuple(poses),
        landmarks=landmarks,
        final_cost=cost,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=converged,
        cost_history=history,
    )


def gauss_newton_localize(
    graph: MeasurementGraph,
    init: Sequence[Pose],
    options: Optional[GnOptions] = None,
) -> GnResult:
    """
    Local solve over poses with known landmarks.

    Args:
        graph (MeasurementGraph): Localization graph.
        init (Sequence[Pose]): Initial poses.
        options (GnOptions, optional): Solver settings.

    Raises:
        LineSearchFailure: If damped steps keep failing to decrease the cost.
    """
    if len(init) != graph.n_poses:
        raise ValueError(f"{len(init)} initial poses for {graph.n_poses} poses")
    return _optimize(
        _LeastSquares(graph, slam=False), init, None, options or GnOptions()
    )


def gauss_newton_slam(
    graph: MeasurementGraph,
    init: Estimate,
    options: Optional[GnOptions] = None,
) -> GnResult:
    """
    Local solve over poses and world landmarks.

    Raises:
        GaugeUnfixed: If the graph has no prior edge.
        LineSearchFailure: If damped steps keep failing to decrease the cost.
    """
    graph.require_gauge()
    if init.landmarks is None:
        raise ValueError("SLAM initialization needs landmark positions")
    landmarks = np.array(init.landmarks, dtype=np.float64).reshape(-1, 3)
    return _optimize(
        _LeastSquares(graph, slam=True), init.poses, landmarks, options or GnOptions()
    )
