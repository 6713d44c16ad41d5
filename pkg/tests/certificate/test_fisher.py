"""
Tests for certificate analysis in src.certificate.fisher.
"""

import numpy as np
import pytest

from src.certificate import (
    MappingJacobian,
    assemble_certificate,
    corank,
    fim_from_certificate,
    wahba_mapping_jacobian,
)
from src.errors import MultiplierMismatch
from src.estimation import numerical_hessian
from src.experiments import Scenario, generate_scenario
from src.geometry import Pose, TangentVector, random_rotation
from src.problems import (
    build_localization_problem,
    lift_localization,
    localization_layout,
)
from src.sdp import TIGHT_ER, SolverOptions, eigenvalue_ratio, solve_sdp


@pytest.fixture
def solved_noise_free(noise_free_wahba):
    """Noise-free localization problem, its SDP solution and ground truth."""
    graph, truth = noise_free_wahba
    problem = build_localization_problem(graph)
    return graph, truth, problem, solve_sdp(problem, SolverOptions(tol=1e-9))


class TestAssembly:
    """Test certificate assembly."""

    def test_matches_solver(self, solved_noise_free):
        """Test that assembling from multipliers reproduces the solver's H."""
        _, _, problem, sol = solved_noise_free
        h = assemble_certificate(problem, sol.multipliers, sol.rho)
        np.testing.assert_allclose(h, sol.certificate, atol=1e-8 * np.abs(h).max())

    def test_multiplier_mismatch(self, solved_noise_free):
        """Test that a wrong multiplier count raises MultiplierMismatch."""
        _, _, problem, _ = solved_noise_free
        with pytest.raises(MultiplierMismatch):
            assemble_certificate(problem, np.zeros(3), 0.0)

    def test_corank(self):
        """Test the numerical nullity of a PSD matrix."""
        assert corank(np.diag([2.0, 1.0, 1e-12, 0.0])) == 2
        assert corank(np.eye(3)) == 0

    def test_certificate_annihilates_truth(self, solved_noise_free):
        """Test H z̄ ≈ 0 at the true lift."""
        _, truth, problem, sol = solved_noise_free
        z = lift_localization(truth.poses, problem.layout)
        scale = np.abs(sol.certificate).max() * np.linalg.norm(z)
        assert np.linalg.norm(sol.certificate @ z) <= 1e-5 * scale
        assert corank(sol.certificate) >= 1


class TestMappingJacobian:
    """Test the lift Jacobian."""

    def test_singular_values(self, rng):
        """Test √2 for rotation columns and 1 for translation columns."""
        poses = [Pose(random_rotation(rng), rng.standard_normal(3)) for _ in range(2)]
        jac = wahba_mapping_jacobian(poses)
        assert jac.matrix.shape == (25, 12)
        assert jac.s_min == pytest.approx(1.0)
        values = np.sort(np.linalg.svd(jac.matrix, compute_uv=False))
        np.testing.assert_allclose(values[:6], 1.0)
        np.testing.assert_allclose(values[6:], np.sqrt(2.0))
        assert jac.blocks == ["r0", "t0", "r1", "t1"]

    def test_matches_finite_differences(self, rng):
        """Test L against differences of the lift under left perturbations."""
        pose = Pose(random_rotation(rng), rng.standard_normal(3))
        layout = localization_layout(1)
        jac = wahba_mapping_jacobian([pose], layout).matrix

        def lift(p):
            return lift_localization([p], layout)

        step = 1e-6
        numeric = np.zeros_like(jac)
        for k in range(6):
            e = np.zeros(6)
            e[k] = step
            plus = lift(pose.retract(TangentVector.from_array(e)))
            minus = lift(pose.retract(TangentVector.from_array(-e)))
            numeric[:, k] = (plus - minus) / (2 * step)
        np.testing.assert_allclose(jac, numeric, atol=1e-8)


class TestFisherInformation:
    """Test the FIM recovered from a certificate."""

    def test_matches_numerical_hessian(self, solved_noise_free):
        """Test LᵀHL against the finite-difference Hessian of ½J."""
        graph, truth, problem, sol = solved_noise_free
        jac = wahba_mapping_jacobian(truth.poses, problem.layout)
        report = fim_from_certificate(sol.certificate, jac)
        hess = numerical_hessian(graph, truth.poses)
        scale = np.abs(hess).max()
        np.testing.assert_allclose(report.fim, hess, atol=1e-4 * scale)

    def test_eigenvalue_bound(self, solved_noise_free):
        """Test λ_min(H̄) ≤ λ_min(Σ⁻¹)/s_min² and a positive definite FIM."""
        _, truth, problem, sol = solved_noise_free
        jac = wahba_mapping_jacobian(truth.poses, problem.layout)
        report = fim_from_certificate(sol.certificate, jac)
        assert report.bound_slack >= -1e-6 * max(1.0, report.min_eig_fim)
        assert report.min_eig_fim > 0.0
        assert report.covariance is not None
        np.testing.assert_allclose(
            report.covariance @ report.fim, np.eye(6), atol=1e-6
        )
        assert set(report.summary()) >= {"fim", "covariance", "bound_slack"}

    def test_row_mismatch(self):
        """Test that a Jacobian with the wrong row count is rejected."""
        jac = MappingJacobian(matrix=np.zeros((5, 6)), blocks=["r0", "t0"])
        with pytest.raises(ValueError):
            fim_from_certificate(np.eye(13), jac)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_identity_across_instances(self, seed):
        """Test LᵀHL against the finite-difference Hessian on tight instances."""
        scenario = Scenario(
            n_landmarks=10,
            noise_std=0.05,
            anisotropy=1.0 + seed,
            add_noise=False,
            seed=seed,
        )
        graph, truth = generate_scenario(scenario)
        problem = build_localization_problem(graph)
        sol = solve_sdp(problem, SolverOptions(tol=1e-9))
        assert eigenvalue_ratio(sol.z_mat) >= TIGHT_ER
        jac = wahba_mapping_jacobian(truth.poses, problem.layout)
        fim = fim_from_certificate(sol.certificate, jac).fim
        hess = numerical_hessian(graph, truth.poses)
        assert np.linalg.norm(fim - hess) <= 1e-4 * np.linalg.norm(hess)
