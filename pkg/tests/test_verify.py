"""Tests for the independent verification oracles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

import expen as ep
from expen.exceptions import DimensionError, NotStationaryError

from helpers import stiefel


class TestCheckReport:
    def test_passed_iff_within_tolerance(self):
        good = ep.CheckReport(name="x", max_rel_error=1e-7, tolerance=1e-5,
                              passed=True, samples=3)
        assert good.passed
        assert "status=PASS" in good.line()
        bad = ep.CheckReport(name="x", max_rel_error=1e-3, tolerance=1e-5,
                             passed=False, samples=3)
        assert "status=FAIL" in bad.line()

    def test_line_contains_fields(self):
        rep = ep.CheckReport(name="demo", max_rel_error=2.5e-9, tolerance=1e-6,
                             passed=True, samples=12)
        line = rep.line()
        assert "check=demo" in line
        assert "max_rel_error=2.500e-09" in line
        assert "tolerance=1.0e-06" in line
        assert "samples=12" in line


class TestFdGradientCheck:
    def test_penalty_gradient_passes(self):
        obj = ep.nleig_make(8, 3, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=10.0)
        rng = np.random.default_rng(0)
        X = rng.standard_normal((8, 3)) * 0.7
        rep = ep.fd_gradient_check(model.value, model.grad, X, samples=10,
                                   name="penalty-grad")
        assert rep.passed, rep.line()
        assert rep.samples == 10

    def test_mildly_nonlinear_case_near_machine_precision(self):
        # Penalty-free smoothed objective of a linear f at a feasible point:
        # the gradient is exact, so FD agreement reaches ~1e-9.
        rng = np.random.default_rng(1)
        C = rng.standard_normal((7, 3))
        obj = ep.linear_make(C)
        Q = stiefel(7, 3, seed=2)
        rep = ep.fd_gradient_check(
            lambda Z: ep.smoothed_value(obj, Z),
            lambda Z: ep.smoothed_grad(obj, Z),
            Q,
            samples=10,
            tolerance=1e-9,
            name="linear-smoothed",
        )
        assert rep.passed, rep.line()

    def test_negative_control_fails(self):
        obj = ep.nleig_make(6, 2, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=5.0)
        rng = np.random.default_rng(3)
        X = rng.standard_normal((6, 2)) * 0.8
        rep = ep.fd_gradient_check(model.value,
                                   lambda Z: 2.0 * model.grad(Z),
                                   X, samples=5, name="corrupted")
        assert not rep.passed

    def test_deterministic_in_seed(self):
        obj = ep.nleig_make(5, 2, alpha=0.4)
        rng = np.random.default_rng(4)
        X = rng.standard_normal((5, 2))
        a = ep.fd_gradient_check(obj.value, obj.gradient, X, samples=6, seed=9)
        b = ep.fd_gradient_check(obj.value, obj.gradient, X, samples=6, seed=9)
        assert a == b


class TestFdHessvecCheck:
    def test_constant_objective_at_origin_is_exact(self):
        model = ep.ExPenModel(objective=ep.constant_make(4, 2), beta=3.0)
        X = np.zeros((4, 2))
        rep = ep.fd_hessvec_check(model.grad, model.hess_vec, X, samples=8,
                                  tolerance=1e-10)
        assert rep.passed, rep.line()

    def test_quadratic_objective_near_machine_precision(self):
        obj = ep.brockett_make(ep.random_symmetric(6, 0), ep.random_symmetric(3, 1))
        rng = np.random.default_rng(5)
        X = rng.standard_normal((6, 3))
        rep = ep.fd_hessvec_check(obj.gradient, obj.hess_vec, X, samples=8,
                                  tolerance=1e-8)
        assert rep.passed, rep.line()

    def test_penalty_hessian_passes_at_default_tolerance(self):
        obj = ep.nleig_make(6, 3, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=7.0)
        rng = np.random.default_rng(6)
        X = rng.standard_normal((6, 3)) * 0.6
        rep = ep.fd_hessvec_check(model.grad, model.hess_vec, X, samples=10)
        assert rep.passed, rep.line()

    def test_negative_control_fails(self):
        obj = ep.nleig_make(5, 2, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=4.0)
        rng = np.random.default_rng(7)
        X = rng.standard_normal((5, 2))
        rep = ep.fd_hessvec_check(model.grad,
                                  lambda Z, D: 2.0 * model.hess_vec(Z, D),
                                  X, samples=5)
        assert not rep.passed


class TestAssembleHessian:
    def test_constant_objective_at_origin(self):
        beta = 6.0
        model = ep.ExPenModel(objective=ep.constant_make(3, 2), beta=beta)
        H = ep.assemble_hessian(model, np.zeros((3, 2)))
        assert np.array_equal(H, -beta * np.eye(6))

    def test_output_symmetric(self):
        obj = ep.nleig_make(5, 2, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=8.0)
        rng = np.random.default_rng(8)
        X = rng.standard_normal((5, 2)) * 0.7
        H = ep.assemble_hessian(model, X)
        assert np.array_equal(H, H.T)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_hess_vec_probes(self, seed):
        obj = ep.nleig_make(6, 2, alpha=0.9)
        model = ep.ExPenModel(objective=obj, beta=5.0)
        rng = np.random.default_rng(seed + 50)
        X = rng.standard_normal((6, 2)) * 0.8
        H = ep.assemble_hessian(model, X)
        for _ in range(5):
            D = rng.standard_normal((6, 2))
            hv = model.hess_vec(X, D)
            assert_allclose(H @ D.ravel(), hv.ravel(),
                            rtol=1e-10, atol=1e-10)
            quad = D.ravel() @ H @ D.ravel()
            assert abs(quad - ep.inner(D, hv)) <= 1e-10 * (1.0 + abs(quad))

    def test_size_guard(self):
        model = ep.ExPenModel(objective=ep.constant_make(100, 30), beta=1.0)
        with pytest.raises(DimensionError):
            ep.assemble_hessian(model, np.zeros((100, 30)))


class TestTangentBasis:
    @pytest.mark.parametrize("shape", [(5, 2), (7, 3), (6, 6)])
    def test_dimension_and_orthonormality(self, shape):
        n, p = shape
        Q = stiefel(n, p, seed=n + p)
        B = ep.tangent_basis(Q)
        dim = n * p - p * (p + 1) // 2
        assert B.shape == (n * p, dim)
        assert_allclose(B.T @ B, np.eye(dim), rtol=0, atol=1e-12)

    def test_columns_are_tangent(self):
        Q = stiefel(6, 3, seed=20)
        B = ep.tangent_basis(Q)
        for i in range(B.shape[1]):
            D = B[:, i].reshape(6, 3)
            assert ep.fnorm(ep.sym(D.T @ Q)) <= 1e-10


class TestSpectrumCorrespondence:
    def test_constant_objective_structure(self):
        # hess f = 0: the penalty Hessian has np - p(p+1)/2 zero eigenvalues
        # and p(p+1)/2 eigenvalues equal to 2*beta.
        beta = 9.0
        n, p = 5, 2
        obj = ep.constant_make(n, p)
        model = ep.ExPenModel(objective=obj, beta=beta)
        Q = stiefel(n, p, seed=21)
        rep = ep.spectrum_correspondence(model, obj, Q)
        assert rep.passed, rep.line()
        lam = np.linalg.eigvalsh(ep.assemble_hessian(model, Q))
        r = n * p - p * (p + 1) // 2
        assert_allclose(lam[:r], np.zeros(r), rtol=0, atol=1e-10 * (1.0 + 2 * beta))
        assert_allclose(lam[r:], np.full(p * (p + 1) // 2, 2.0 * beta),
                        rtol=1e-10, atol=1e-10)

    def test_brockett_analytic_minimizer(self):
        B = np.diag([1.0, 2.0, 3.0, 4.0])
        C = np.diag([2.0, 1.0])
        obj = ep.brockett_make(B, C)
        model = ep.ExPenModel(objective=obj, beta=100.0)
        Xstar = np.zeros((4, 2))
        Xstar[0, 0] = 1.0
        Xstar[1, 1] = 1.0
        rep = ep.spectrum_correspondence(model, obj, Xstar)
        assert rep.passed, rep.line()
        assert rep.samples == 4 * 2 - 3  # tangent dimension

    def test_not_stationary_raises(self):
        obj = ep.nleig_make(6, 2, alpha=1.0)
        model = ep.ExPenModel(objective=obj, beta=10.0)
        with pytest.raises(NotStationaryError):
            ep.spectrum_correspondence(model, obj, stiefel(6, 2, seed=22))


class TestStrictSaddleCheck:
    @pytest.mark.parametrize("beta", [1.0, 10.0, 24.0])
    def test_passes(self, beta):
        rep = ep.strict_saddle_check(beta)
        assert rep.passed, rep.line()
        assert rep.tolerance == 1e-10

    def test_invalid_beta_raises(self):
        with pytest.raises(DimensionError):
            ep.strict_saddle_check(0.0)


class TestInnerIdentityCheck:
    def test_passes_on_random_points(self):
        obj = ep.nleig_make(7, 3, alpha=1.0)
        rng = np.random.default_rng(9)
        X = rng.standard_normal((7, 3))
        rep = ep.inner_identity_check(obj, X, samples=50)
        assert rep.passed, rep.line()
        assert rep.samples == 50

    def test_exact_at_origin(self):
        obj = ep.brockett_make(ep.random_symmetric(5, 2), ep.random_symmetric(2, 3))
        rep = ep.inner_identity_check(obj, np.zeros((5, 2)), samples=1)
        assert rep.max_rel_error == 0.0

    def test_negative_control_fails(self):
        obj = ep.nleig_make(6, 2, alpha=1.0)
        rng = np.random.default_rng(10)
        X = rng.standard_normal((6, 2))
        rep = ep.inner_identity_check(
            obj, X, samples=20,
            smoothed_grad_fn=lambda o, Z: 2.0 * ep.smoothed_grad(o, Z),
        )
        assert not rep.passed


class TestSelfadjointCheck:
    @pytest.mark.parametrize("seed", range(3))
    def test_passes(self, seed):
        rng = np.random.default_rng(seed + 60)
        X = rng.standard_normal((10, 4))
        rep = ep.selfadjoint_check(X, samples=50, seed=seed)
        assert rep.passed, rep.line()

    def test_negative_control_fails(self):
        # Note: merely dropping the symmetrization in the last term does NOT
        # break self-adjointness (tr(X^T W X^T Z) = tr(W^T X Z^T X) by
        # cyclicity), so the control adds a skew post-multiplier instead.
        rng = np.random.default_rng(11)
        X = rng.standard_normal((8, 3))
        K = np.zeros((3, 3))
        K[0, 1], K[1, 0] = 1.0, -1.0

        def skewed(Z, D):
            return ep.jx_apply(Z, D) + D @ K

        rep = ep.selfadjoint_check(X, samples=20, operator=skewed)
        assert not rep.passed
