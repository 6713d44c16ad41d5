"""
Monte-Carlo check of the certificate-derived covariance.

The geometry of a localization scenario is fixed and only the measurement
noise is resampled. Each trial is solved globally and its left-perturbation
error from the ground truth is collected; the sample covariance of those
errors is compared with (LᵀHL)⁻¹ computed from the noise-free certificate.
"""

import logging
from dataclasses import dataclass
from time import perf_counter
from typing import Optional

import numpy as np

from src.errors import CertestError, InvalidInput, NotPositiveDefinite
from src.experiments.runner import fisher_report, solve_instance
from src.experiments.scenarios import Scenario, ScenarioKind, generate_scenario
from src.linalg import FloatArray, sym_eigvals
from src.sdp import SolverOptions

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceReport:
    """
    Args:
        sample_covariance (FloatArray): Covariance of the trial errors.
        theoretical_covariance (FloatArray): (LᵀHL)⁻¹ at the ground truth.
        frobenius_relative_error (float): ‖S − Σ‖_F / ‖Σ‖_F.
        max_eigenvalue_error (float): Largest relative eigenvalue mismatch.
        n_used (int): Tight trials included.
        n_excluded (int): Non-tight or failed trials left out.
    """

    sample_covariance: FloatArray
    theoretical_covariance: FloatArray
    frobenius_relative_error: float
    max_eigenvalue_error: float
    n_used: int
    n_excluded: int

    def summary(self) -> dict:
        return {
            "frobenius_relative_error": self.frobenius_relative_error,
            "max_eigenvalue_error": self.max_eigenvalue_error,
            "n_used": self.n_used,
            "n_excluded": self.n_excluded,
            "sample_covariance": self.sample_covariance.tolist(),
            "theoretical_covariance": self.theoretical_covariance.tolist(),
        }


def theoretical_covariance(
    scenario: Scenario, redundant: bool = False, options: Optional[SolverOptions] = None
) -> FloatArray:
    """
    (LᵀHL)⁻¹ from the certificate of the noise-free instance.

    Raises:
        NotPositiveDefinite: If the Fisher information is singular.
    """
    graph, truth = generate_scenario(
        scenario.model_copy(update={"add_noise": False}),
        noise_rng=np.random.default_rng(0),
    )
    result = solve_instance(graph, truth, redundant, options)
    report = fisher_report(result)
    if report.covariance is None:
        raise NotPositiveDefinite(
            f"Fisher information is singular (min eig {report.min_eig_fim:.3e})"
        )
    return report.covariance


def covariance_study(
    scenario: Scenario,
    n_trials: int,
    redundant: bool = False,
    options: Optional[SolverOptions] = None,
) -> CovarianceReport:
    """
    Compare the sample covariance of global estimates with (LᵀHL)⁻¹.

    Args:
        scenario (Scenario): Localization scenario; its seed fixes the
            geometry and seeds the noise stream.
        n_trials (int): Noise draws.
        redundant (bool, optional): Add redundant constraints.
        options (SolverOptions, optional): SDP settings.

    Raises:
        InvalidInput: For SLAM scenarios or fewer than 2 trials.
    """
    if ScenarioKind(scenario.kind) == ScenarioKind.SLAM_STEREO:
        raise InvalidInput("covariance study needs a localization scenario")
    if n_trials < 2:
        raise InvalidInput(f"need at least 2 trials, got {n_trials}")
    start = perf_counter()
    theory = theoretical_covariance(scenario, redundant, options)
    noise_rng = np.random.default_rng([scenario.seed, 1])
    errors = []
    excluded = 0
    for trial in range(n_trials):
        try:
            graph, truth = generate_scenario(scenario, noise_rng=noise_rng)
            result = solve_instance(graph, truth, redundant, options)
        except CertestError as e:
            log.warning(f"Trial {trial} failed: {e}")
            excluded += 1
            continue
        if not result.tight:
            excluded += 1
            continue
        pairs = zip(result.estimate.poses, truth.poses)
        errors.append(np.concatenate([p.local(q).as_array() for p, q in pairs]))
    if len(errors) < 2:
        raise InvalidInput(f"only {len(errors)} of {n_trials} trials were tight")
    errors = np.array(errors)
    sample = errors.T @ errors / len(errors)
    report = CovarianceReport(
        sample_covariance=sample,
        theoretical_covariance=theory,
        frobenius_relative_error=float(
            np.linalg.norm(sample - theory) / np.linalg.norm(theory)
        ),
        max_eigenvalue_error=_eigenvalue_error(sample, theory),
        n_used=len(errors),
        n_excluded=excluded,
    )
    log.info(
        f"[metric:cov.study] trials={n_trials} used={report.n_used} "
        f"frobenius_error={report.frobenius_relative_error:.3e} "
        f"{perf_counter() - start:.2f}s"
    )
    return report


def _eigenvalue_error(sample: FloatArray, theory: FloatArray) -> float:
    s, t = sym_eigvals(sample), sym_eigvals(theory)
    return float(np.max(np.abs(s - t) / np.abs(t)))
