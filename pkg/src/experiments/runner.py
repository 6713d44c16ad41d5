"""
End-to-end solve of one measurement graph: build, prune, solve, round and
score.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.certificate import FisherReport, fim_from_certificate, wahba_mapping_jacobian
from src.errors import InvalidInput, NumericalFailure
from src.experiments.scenarios import GroundTruth
from src.problems import (
    BlockKind,
    Estimate,
    MeasurementGraph,
    PoseModel,
    QcqpProblem,
    build_localization_problem,
    build_slam_problem,
    graph_objective,
    prune_dependent_constraints,
)
from src.sdp import (
    SdpSolution,
    SolverOptions,
    SolverStatus,
    TightnessReport,
    extract_rounded_solution,
    solve_sdp,
    tightness_report,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InstanceResult:
    """
    Outcome of solve_instance.

    Args:
        problem (QcqpProblem): Independent constraint set that was solved.
        solution (SdpSolution): Solver output, the best iterate on failure.
        estimate (Estimate): Rounded feasible estimate.
        rounded_cost (float): Graph cost of the rounded estimate.
        tightness (TightnessReport): ER, relative gap and ranks.
        rotation_error (float): Largest ‖C − C_true‖_F over poses, NaN
            without ground truth.
        n_raw_constraints (int): Constraints before pruning.
    """

    problem: QcqpProblem
    solution: SdpSolution
    estimate: Estimate
    rounded_cost: float
    tightness: TightnessReport
    rotation_error: float
    n_raw_constraints: int

    @property
    def status(self) -> SolverStatus:
        return self.solution.status

    @property
    def tight(self) -> bool:
        return self.status == SolverStatus.OPTIMAL and self.tightness.tight

    def row(self) -> dict:
        """Scalar metrics, the per-instance record of a sweep."""
        return {
            "status": self.status.value,
            "er": self.tightness.er,
            "relative_gap": self.tightness.relative_gap,
            "rank": self.tightness.rank_estimate,
            "corank_h": self.tightness.corank_h,
            "primal_cost": self.solution.primal_cost,
            "dual_cost": self.solution.dual_cost,
            "rounded_cost": self.rounded_cost,
            "rotation_error": self.rotation_error,
            "iterations": self.solution.iterations,
            "n_constraints": self.problem.n_constraints,
        }

    def summary(self) -> dict:
        """JSON-ready report of the solve and the rounded estimate."""
        landmarks = self.estimate.landmarks
        row = {
            k: None if isinstance(v, float) and not np.isfinite(v) else v
            for k, v in self.row().items()
        }
        return {
            **row,
            "tight": self.tight,
            "n_raw_constraints": self.n_raw_constraints,
            "solver": self.solution.summary(),
            "poses": [PoseModel.from_pose(p).model_dump() for p in self.estimate.poses],
            "landmarks": None if landmarks is None else landmarks.tolist(),
        }


def build_problem(graph: MeasurementGraph, redundant: bool = False) -> QcqpProblem:
    """Localization or SLAM QCQP depending on whether landmarks are known."""
    if graph.is_slam:
        return build_slam_problem(graph, redundant=redundant)
    return build_localization_problem(graph, redundant=redundant)


def solve_instance(
    graph: MeasurementGraph,
    truth: Optional[GroundTruth] = None,
    redundant: bool = False,
    options: Optional[SolverOptions] = None,
) -> InstanceResult:
    """
    Solve the relaxation of a graph and score its tightness.

    A stalled solve is not raised; its best iterate is rounded and scored
    and the result carries status NUMERICAL_FAILURE.

    Args:
        graph (MeasurementGraph): Localization or SLAM graph.
        truth (GroundTruth, optional): Ground truth for the rotation error.
        redundant (bool, optional): Add redundant constraints.
        options (SolverOptions, optional): SDP solver settings.

    Returns:
        InstanceResult: Solution, rounded estimate and metrics.
    """
    raw = build_problem(graph, redundant)
    options = options or SolverOptions()
    problem, _ = prune_dependent_constraints(raw, tol=options.independence_tol)
    options = options.model_copy(update={"check_independence": False})
    try:
        solution = solve_sdp(problem, options)
    except NumericalFailure as e:
        log.warning(f"Solver failed, scoring best iterate: {e}")
        solution = e.best_iterate
    estimate = extract_rounded_solution(solution, problem.layout, allow_failed=True)
    rounded_cost = graph_objective(graph, estimate.poses, estimate.landmarks)
    rotation_error = np.nan
    if truth is not None:
        rotation_error = max(
            float(np.linalg.norm(p.rotation - q.rotation))
            for p, q in zip(estimate.poses, truth.poses)
        )
    return InstanceResult(
        problem=problem,
        solution=solution,
        estimate=estimate,
        rounded_cost=rounded_cost,
        tightness=tightness_report(solution, rounded_cost),
        rotation_error=rotation_error,
        n_raw_constraints=raw.n_constraints,
    )


def fisher_report(result: InstanceResult) -> FisherReport:
    """
    Fisher information LᵀHL of a solved localization instance.

    Raises:
        InvalidInput: For SLAM layouts.
    """
    layout = result.problem.layout
    if any(b.kind == BlockKind.LANDMARK for b in layout.blocks):
        raise InvalidInput("Fisher report needs a localization problem")
    jacobian = wahba_mapping_jacobian(result.estimate.poses, layout)
    return fim_from_certificate(result.solution.certificate, jacobian)
