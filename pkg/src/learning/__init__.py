from .nullspace import (
    as_constraints,
    learn_constraints,
    learned_problem,
    max_violation,
    span_residual,
)
from .sampler import FeasibleSampleSet, ProblemTemplate, TemplateKind, sample_feasible

__all__ = [
    "FeasibleSampleSet",
    "ProblemTemplate",
    "TemplateKind",
    "as_constraints",
    "learn_constraints",
    "learned_problem",
    "max_violation",
    "sample_feasible",
    "span_residual",
]
