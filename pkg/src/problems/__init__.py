from .builders import (
    build_localization_problem,
    build_slam_problem,
    build_wahba_problem,
    split_wahba_subproblems,
    unique_edges,
)
from .constraints import (
    BASE,
    REDUNDANT,
    Constraint,
    base_rotation_constraints,
    homogenizing_constraint,
    redundant_rotation_constraints,
    redundant_slam_constraints,
    substitution_constraints,
)
from .costs import build_prior_cost, build_relpose_cost, build_wahba_cost
from .graph import (
    Estimate,
    LandmarkEdge,
    MeasurementGraph,
    NondegeneracyReport,
    PriorEdge,
    RelativePoseEdge,
    check_landmark_nondegeneracy,
    graph_objective,
)
from .layout import (
    Block,
    BlockKind,
    VariableLayout,
    localization_layout,
    rotation_layout,
    slam_layout,
)
from .lifting import lift_localization, lift_slam, read_blocks
from .problem import (
    QcqpProblem,
    constraint_rows,
    prune_dependent_constraints,
    scatter_multipliers,
)
from .schemas import (
    GraphModel,
    PoseModel,
    ProblemModel,
    graph_from_json,
    graph_to_json,
    problem_from_json,
    problem_to_json,
)

__all__ = [
    "BASE",
    "REDUNDANT",
    "Block",
    "BlockKind",
    "Constraint",
    "Estimate",
    "GraphModel",
    "LandmarkEdge",
    "MeasurementGraph",
    "NondegeneracyReport",
    "PoseModel",
    "PriorEdge",
    "ProblemModel",
    "QcqpProblem",
    "RelativePoseEdge",
    "VariableLayout",
    "base_rotation_constraints",
    "build_localization_problem",
    "build_prior_cost",
    "build_relpose_cost",
    "build_slam_problem",
    "build_wahba_cost",
    "build_wahba_problem",
    "check_landmark_nondegeneracy",
    "constraint_rows",
    "graph_from_json",
    "graph_objective",
    "graph_to_json",
    "homogenizing_constraint",
    "lift_localization",
    "lift_slam",
    "localization_layout",
    "problem_from_json",
    "problem_to_json",
    "prune_dependent_constraints",
    "read_blocks",
    "redundant_rotation_constraints",
    "redundant_slam_constraints",
    "rotation_layout",
    "scatter_multipliers",
    "slam_layout",
    "split_wahba_subproblems",
    "substitution_constraints",
]
