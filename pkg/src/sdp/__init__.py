from .metrics import (
    TIGHT_ER,
    TightnessReport,
    eigenvalue_ratio,
    rank_estimate,
    relative_gap,
    tightness_report,
)
from .rounding import extract_rounded_solution
from .solver import (
    KktReport,
    SdpSolution,
    SolverOptions,
    SolverStatus,
    require_independent,
    solve_sdp,
)

__all__ = [
    "TIGHT_ER",
    "KktReport",
    "SdpSolution",
    "SolverOptions",
    "SolverStatus",
    "TightnessReport",
    "eigenvalue_ratio",
    "extract_rounded_solution",
    "rank_estimate",
    "relative_gap",
    "require_independent",
    "solve_sdp",
    "tightness_report",
]
