"""
JSON schemas for measurement graphs and QCQP problems.

Symmetric matrices are stored as their upper triangle, row by row
(numpy.triu_indices order), without scaling.
"""

from typing import Annotated, Any, Dict, List, Optional

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field

from src.geometry import Pose
from src.problems.constraints import Constraint
from src.problems.graph import (
    LandmarkEdge,
    MeasurementGraph,
    PriorEdge,
    RelativePoseEdge,
)
from src.problems.layout import VariableLayout
from src.problems.problem import QcqpProblem

Vector3 = Annotated[List[float], Field(min_length=3, max_length=3)]
Matrix3 = Annotated[List[Vector3], Field(min_length=3, max_length=3)]


def upper_triangle(m) -> List[float]:
    arr = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=np.float64)
    rows, cols = np.triu_indices(arr.shape[0])
    return arr[rows, cols].tolist()


def from_upper_triangle(values: List[float], n: int) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if v.size != n * (n + 1) // 2:
        raise ValueError(f"expected {n * (n + 1) // 2} entries, got {v.size}")
    rows, cols = np.triu_indices(n)
    out = np.zeros((n, n))
    out[rows, cols] = v
    out[cols, rows] = v
    return out


class PoseModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rotation: Matrix3
    translation: Vector3

    def to_pose(self) -> Pose:
        return Pose(np.asarray(self.rotation), np.asarray(self.translation))

    @classmethod
    def from_pose(cls, pose: Pose) -> "PoseModel":
        return cls(
            rotation=pose.rotation.tolist(), translation=pose.translation.tolist()
        )


class LandmarkEdgeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pose: int = Field(ge=0)
    landmark: int = Field(ge=0)
    measurement: Vector3
    weight: Matrix3


class RelativePoseEdgeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int = Field(ge=0)
    j: int = Field(ge=0)
    measurement: PoseModel
    sigma: float
    tau: float


class PriorEdgeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pose: int = Field(ge=0)
    measurement: PoseModel
    sigma: float
    tau: float


class GraphModel(BaseModel):
    """Serialized MeasurementGraph."""

    model_config = ConfigDict(extra="forbid")

    n_poses: int = Field(ge=1)
    n_landmarks: int = Field(ge=0)
    landmark_edges: List[LandmarkEdgeModel]
    relpose_edges: List[RelativePoseEdgeModel] = []
    prior_edges: List[PriorEdgeModel] = []
    known_landmarks: Optional[Dict[int, Vector3]] = None

    def to_graph(self) -> MeasurementGraph:
        return MeasurementGraph(
            n_poses=self.n_poses,
            n_landmarks=self.n_landmarks,
            landmark_edges=[
                LandmarkEdge(e.pose, e.landmark, np.asarray(e.measurement), e.weight)
                for e in self.landmark_edges
            ],
            relpose_edges=[
                RelativePoseEdge(e.i, e.j, e.measurement.to_pose(), e.sigma, e.tau)
                for e in self.relpose_edges
            ],
            prior_edges=[
                PriorEdge(e.pose, e.measurement.to_pose(), e.sigma, e.tau)
                for e in self.prior_edges
            ],
            known_landmarks=self.known_landmarks,
        )

    @classmethod
    def from_graph(cls, graph: MeasurementGraph) -> "GraphModel":
        known = None
        if graph.known_landmarks is not None:
            known = {k: v.tolist() for k, v in graph.known_landmarks.items()}
        return cls(
            n_poses=graph.n_poses,
            n_landmarks=graph.n_landmarks,
            landmark_edges=[
                LandmarkEdgeModel(
                    pose=e.pose,
                    landmark=e.landmark,
                    measurement=e.measurement.tolist(),
                    weight=e.weight.tolist(),
                )
                for e in graph.landmark_edges
            ],
            relpose_edges=[
                RelativePoseEdgeModel(
                    i=e.i,
                    j=e.j,
                    measurement=PoseModel.from_pose(e.measurement),
                    sigma=e.sigma,
                    tau=e.tau,
                )
                for e in graph.relpose_edges
            ],
            prior_edges=[
                PriorEdgeModel(
                    pose=e.pose,
                    measurement=PoseModel.from_pose(e.measurement),
                    sigma=e.sigma,
                    tau=e.tau,
                )
                for e in graph.prior_edges
            ],
            known_landmarks=known,
        )


class BlockModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    kind: str
    start: int
    size: int


class ConstraintModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    family: str
    tag: str
    upper: List[float]


class ProblemModel(BaseModel):
    """Serialized QcqpProblem."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    layout: List[BlockModel]
    q: List[float]
    a0: List[float]
    constraints: List[ConstraintModel]
    metadata: Dict[str, Any] = {}

    def to_problem(self) -> QcqpProblem:
        layout = VariableLayout.from_description([b.model_dump() for b in self.layout])
        if layout.dim != self.dim:
            raise ValueError(f"layout dim {layout.dim} != declared dim {self.dim}")
        constraints = tuple(
            Constraint(
                sp.csr_array(from_upper_triangle(c.upper, self.dim)),
                c.label,
                c.family,
                c.tag,
            )
            for c in self.constraints
        )
        return QcqpProblem(
            q=from_upper_triangle(self.q, self.dim),
            constraints=constraints,
            a0=from_upper_triangle(self.a0, self.dim),
            layout=layout,
            metadata=dict(self.metadata),
        )

    @classmethod
    def from_problem(cls, problem: QcqpProblem) -> "ProblemModel":
        return cls(
            dim=problem.dim,
            layout=[BlockModel(**b) for b in problem.layout.describe()],
            q=upper_triangle(problem.q),
            a0=upper_triangle(problem.a0),
            constraints=[
                ConstraintModel(
                    label=c.label,
                    family=c.family,
                    tag=c.tag,
                    upper=upper_triangle(c.matrix),
                )
                for c in problem.constraints
            ],
            metadata=dict(problem.metadata),
        )


def graph_to_json(graph: MeasurementGraph, indent: Optional[int] = None) -> str:
    return GraphModel.from_graph(graph).model_dump_json(indent=indent)


def graph_from_json(text: str) -> MeasurementGraph:
    return GraphModel.model_validate_json(text).to_graph()


def problem_to_json(problem: QcqpProblem, indent: Optional[int] = None) -> str:
    return ProblemModel.from_problem(problem).model_dump_json(indent=indent)


def problem_from_json(text: str) -> QcqpProblem:
    return ProblemModel.model_validate_json(text).to_problem()
