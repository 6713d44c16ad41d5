"""
Measurement graph → homogeneous QCQP.
"""

import logging
from time import perf_counter
from typing import List, Mapping, Sequence

import numpy.typing as npt

from src.problems.constraints import (
    Constraint,
    base_rotation_constraints,
    homogenizing_constraint,
    redundant_rotation_constraints,
    redundant_slam_constraints,
    substitution_constraints,
)
from src.problems.costs import (
    add_prior_terms,
    add_relpose_terms,
    add_weighted_residual,
    build_wahba_cost,
    landmark_residual,
    substitution_residual,
)
from src.problems.forms import QuadraticForm
from src.problems.graph import LandmarkEdge, MeasurementGraph
from src.problems.layout import localization_layout, slam_layout
from src.problems.problem import QcqpProblem

log = logging.getLogger(__name__)


def _rotation_constraints(layout, n_poses: int, redundant: bool) -> List[Constraint]:
    out: List[Constraint] = []
    for i in range(n_poses):
        out += base_rotation_constraints(layout, i)
    if redundant:
        for i in range(n_poses):
            out += redundant_rotation_constraints(layout, i)
    return out


def build_wahba_problem(
    edges: Sequence[LandmarkEdge],
    landmarks: Mapping[int, npt.ArrayLike],
    redundant: bool = False,
) -> QcqpProblem:
    """
    Single-pose localization with known landmarks.

    Args:
        edges (Sequence[LandmarkEdge]): Observations from the pose.
        landmarks (Mapping[int, ArrayLike]): Known world landmarks.
        redundant (bool, optional): Add row orthonormality, cyclic handedness
            and norm equalities. Defaults to False.

    Returns:
        QcqpProblem: dim 13 with 9 (base) or 30 (redundant) constraints.
    """
    layout = localization_layout(1)
    return QcqpProblem(
        q=build_wahba_cost(edges, landmarks),
        constraints=tuple(_rotation_constraints(layout, 1, redundant)),
        a0=homogenizing_constraint(layout),
        layout=layout,
        metadata={"kind": "wahba", "redundant": redundant},
    )


def build_localization_problem(
    graph: MeasurementGraph, redundant: bool = False
) -> QcqpProblem:
    """
    Multi-pose localization with known landmarks, relative-pose and prior
    edges. Layout [c_0, t_0, ..., c_{N-1}, t_{N-1}, w].

    Raises:
        MissingLandmark: If an edge references an unknown landmark.
    """
    start = perf_counter()
    layout = localization_layout(graph.n_poses)
    form = QuadraticForm(layout.dim)
    for e in graph.landmark_edges:
        m = graph.landmark(e.landmark)
        add_weighted_residual(
            form, landmark_residual(layout, e.pose, e.measurement, m), e.weight
        )
    for e in graph.relpose_edges:
        add_relpose_terms(form, e, layout)
    for e in graph.prior_edges:
        add_prior_terms(form, e, layout)
    problem = QcqpProblem(
        q=form.build().toarray(),
        constraints=tuple(_rotation_constraints(layout, graph.n_poses, redundant)),
        a0=homogenizing_constraint(layout),
        layout=layout,
        metadata={"kind": "localization", "redundant": redundant},
    )
    log.debug(
        f"[metric:build.localization] n={problem.dim} "
        f"m={problem.n_constraints} {perf_counter() - start:.3f}s"
    )
    return problem


def split_wahba_subproblems(
    graph: MeasurementGraph, redundant: bool = False
) -> List[QcqpProblem]:
    """
    Independent per-pose Wahba problems of a graph without pose-pose edges.

    Raises:
        ValueError: If the graph has relative-pose or prior edges.
    """
    if graph.relpose_edges or graph.prior_edges:
        raise ValueError("poses are coupled by relative-pose or prior edges")
    return [
        build_wahba_problem(graph.edges_of(i), graph.known_landmarks or {}, redundant)
        for i in range(graph.n_poses)
    ]


def unique_edges(graph: MeasurementGraph) -> List[tuple]:
    """(pose, landmark) pairs in order of first appearance."""
    seen = dict.fromkeys((e.pose, e.landmark) for e in graph.landmark_edges)
    return list(seen)


def build_slam_problem(graph: MeasurementGraph, redundant: bool = False) -> QcqpProblem:
    """
    Landmark SLAM with substitution variables m_i^k = C_i m_k − t_i.

    Layout: poses, world landmarks, one substitution block per observed
    (pose, landmark) pair, w. The landmark cost is quadratic in the
    substitution variables; substitution constraints tie them to poses and
    landmarks.

    Args:
        graph (MeasurementGraph): SLAM graph with at least one prior edge.
        redundant (bool, optional): Add the redundant rotation and landmark
            geometry constraints. Defaults to False.

    Raises:
        GaugeUnfixed: If the graph has no prior edge.
    """
    start = perf_counter()
    graph.require_gauge()
    edges = unique_edges(graph)
    layout = slam_layout(graph.n_poses, graph.n_landmarks, edges)
    form = QuadraticForm(layout.dim)
    for e in graph.landmark_edges:
        residual = substitution_residual(layout, e.pose, e.landmark, e.measurement)
        add_weighted_residual(form, residual, e.weight)
    for e in graph.relpose_edges:
        add_relpose_terms(form, e, layout)
    for e in graph.prior_edges:
        add_prior_terms(form, e, layout)

    constraints: List[Constraint] = []
    for i in range(graph.n_poses):
        constraints += base_rotation_constraints(layout, i)
    for i, k in edges:
        constraints += substitution_constraints(layout, i, k)
    if redundant:
        for i in range(graph.n_poses):
            constraints += redundant_rotation_constraints(layout, i)
        observed = [graph.observed_by(i) for i in range(graph.n_poses)]
        constraints += redundant_slam_constraints(layout, observed)
    problem = QcqpProblem(
        q=form.build().toarray(),
        constraints=tuple(constraints),
        a0=homogenizing_constraint(layout),
        layout=layout,
        metadata={"kind": "slam", "redundant": redundant},
    )
    log.info(
        f"[metric:build.slam] n={problem.dim} m={problem.n_constraints} "
        f"{perf_counter() - start:.3f}s"
    )
    return problem

