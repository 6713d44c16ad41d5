from .covariance import CovarianceReport, covariance_study, theoretical_covariance
from .export import SweepSummary, emit_results, load_rows, summarize
from .runner import InstanceResult, build_problem, fisher_report, solve_instance
from .scenarios import (
    GroundTruth,
    NoiseConvention,
    Scenario,
    ScenarioKind,
    generate_scenario,
    viewing_pose,
)
from .sweep import (
    CELL_COLUMNS,
    BoundaryPoint,
    GridAxis,
    SweepConfig,
    SweepResult,
    extract_boundary,
    median_smooth,
    run_sweep,
    run_task,
)

__all__ = [
    "CELL_COLUMNS",
    "BoundaryPoint",
    "CovarianceReport",
    "GridAxis",
    "GroundTruth",
    "InstanceResult",
    "NoiseConvention",
    "Scenario",
    "ScenarioKind",
    "SweepConfig",
    "SweepResult",
    "SweepSummary",
    "build_problem",
    "covariance_study",
    "emit_results",
    "extract_boundary",
    "fisher_report",
    "generate_scenario",
    "load_rows",
    "median_smooth",
    "run_sweep",
    "run_task",
    "solve_instance",
    "summarize",
    "theoretical_covariance",
    "viewing_pose",
]
