"""Independent numerical oracles for the closed-form derivatives and spectra.

Every check compares an analytic oracle against a route that does not share
its code: central finite differences for first and second derivatives, dense
eigensolves for spectral claims, and direct two-sided evaluation for the
algebraic identities. Checks accept injectable oracles so the test suite can
corrupt them and confirm the checks still have teeth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, NotStationaryError, NumericalError
from .geometry import riemannian_grad, tangent_project
from .linalg import fnorm, inner, sym
from .model import ExPenModel, apen_map, jx_apply, smoothed_grad
from .problems import constant_make

__all__ = [
    "CheckReport",
    "fd_gradient_check",
    "fd_hessvec_check",
    "assemble_hessian",
    "tangent_basis",
    "spectrum_correspondence",
    "strict_saddle_check",
    "inner_identity_check",
    "selfadjoint_check",
]

_FD_SCALE = 1e-6


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification check."""

    name: str
    max_rel_error: float
    tolerance: float
    passed: bool
    samples: int

    def line(self):
        """One structured log line: name, error, tolerance, sample count, verdict."""
        status = "PASS" if self.passed else "FAIL"
        return (
            f"check={self.name} max_rel_error={self.max_rel_error:.3e} "
            f"tolerance={self.tolerance:.1e} samples={self.samples} status={status}"
        )


def _report(name, err, tolerance, samples):
    err = float(err)
    return CheckReport(
        name=name,
        max_rel_error=err,
        tolerance=float(tolerance),
        passed=bool(err <= tolerance),
        samples=int(samples),
    )


def _unit_directions(shape, samples, seed):
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        W = rng.standard_normal(shape)
        yield W / fnorm(W)


def fd_gradient_check(value, gradient, X, samples=10, *, seed=0, tolerance=1e-5, name="fd_gradient"):
    """Compare a gradient oracle against central differences of the value oracle.

    Along each of `samples` random unit directions W, the directional
    derivative (value(X + tW) - value(X - tW)) / 2t with t = 1e-6 (1 + ||X||_F)
    is compared to <gradient(X), W>; the report carries the worst relative
    error.
    """
    X = np.asarray(X, dtype=float)
    t = _FD_SCALE * (1.0 + fnorm(X))
    G = np.asarray(gradient(X), dtype=float)
    worst = 0.0
    for W in _unit_directions(X.shape, samples, seed):
        fd = (float(value(X + t * W)) - float(value(X - t * W))) / (2.0 * t)
        an = inner(G, W)
        worst = max(worst, abs(fd - an) / (1.0 + abs(an)))
    return _report(name, worst, tolerance, samples)


def fd_hessvec_check(gradient, hess_vec, X, samples=10, *, seed=0, tolerance=1e-4, name="fd_hessvec"):
    """Compare a Hessian-vector oracle against central differences of the gradient."""
    X = np.asarray(X, dtype=float)
    t = _FD_SCALE * (1.0 + fnorm(X))
    worst = 0.0
    for W in _unit_directions(X.shape, samples, seed):
        fd = (np.asarray(gradient(X + t * W), dtype=float) - np.asarray(gradient(X - t * W), dtype=float)) / (2.0 * t)
        hv = np.asarray(hess_vec(X, W), dtype=float)
        worst = max(worst, fnorm(fd - hv) / (1.0 + fnorm(hv)))
    return _report(name, worst, tolerance, samples)


def assemble_hessian(model, X):
    """Materialize the penalty Hessian at X as a symmetric (np) x (np) matrix.

    Column j is the vectorized hess_vec applied to the j-th canonical basis
    matrix (row-major flattening). Guarded to np <= 2000; the raw assembly
    must already be symmetric to 1e-8 relative, and the symmetrized matrix is
    returned.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    dim = n * p
    if dim > 2000:
        raise DimensionError(f"dense Hessian assembly capped at np <= 2000, got {dim}")
    H = np.empty((dim, dim))
    E = np.zeros((n, p))
    for j in range(dim):
        E.flat[j] = 1.0
        H[:, j] = model.hess_vec(X, E).ravel()
        E.flat[j] = 0.0
    asym = fnorm(H - H.T) / (1.0 + fnorm(H))
    if asym > 1e-8:
        raise NumericalError(f"assembled Hessian asymmetry {asym:.3e} exceeds 1e-8")
    return 0.5 * (H + H.T)


def tangent_basis(X):
    """Orthonormal tangent-space basis at feasible X, columns of an (np, dim) array.

    Built by projecting the canonical basis matrices onto the tangent space
    and running modified Gram-Schmidt (two passes), discarding images below
    1e-10. The resulting dimension must equal np - p(p+1)/2.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    dim = n * p - p * (p + 1) // 2
    cols = []
    E = np.zeros((n, p))
    for j in range(n * p):
        E.flat[j] = 1.0
        v = tangent_project(X, E).ravel()
        E.flat[j] = 0.0
        for _ in range(2):
            for b in cols:
                v = v - (b @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-10:
            cols.append(v / nv)
    if len(cols) != dim:
        raise NumericalError(f"tangent basis has {len(cols)} vectors, expected {dim}")
    return np.column_stack(cols)


def spectrum_correspondence(model, obj, Xstar, *, tolerance=1e-6, name="spectrum"):
    """Check that the Riemannian Hessian spectrum embeds in the penalty Hessian's.

    At a feasible first-order stationary point, every eigenvalue of the
    Riemannian Hessian of f (assembled on an orthonormal tangent basis from
    the objective's own oracles) must appear among the eigenvalues of the
    penalty Hessian (assembled independently from the model oracle); the
    leftover p(p+1)/2 eigenvalues must exceed the largest tangent eigenvalue
    when beta is large. Matching is greedy nearest-eigenvalue without
    replacement, relative tolerance 1e-6 per eigenvalue.
    """
    Xstar = np.asarray(Xstar, dtype=float)
    n, p = Xstar.shape
    rg = fnorm(riemannian_grad(obj, Xstar))
    if rg > 1e-8:
        raise NotStationaryError(f"||riemannian grad||_F = {rg:.3e} exceeds 1e-8 at Xstar")

    basis = tangent_basis(Xstar)
    Sg = sym(Xstar.T @ np.asarray(obj.gradient(Xstar), dtype=float))
    images = np.empty((n * p, basis.shape[1]))
    for i in range(basis.shape[1]):
        D = basis[:, i].reshape(n, p)
        images[:, i] = (np.asarray(obj.hess_vec(Xstar, D), dtype=float) - D @ Sg).ravel()
    riem = sym(basis.T @ images)
    lam_tangent = np.linalg.eigvalsh(riem)
    lam_penalty = np.linalg.eigvalsh(assemble_hessian(model, Xstar))

    remaining = lam_penalty.tolist()
    worst = 0.0
    for lam in lam_tangent:
        j = min(range(len(remaining)), key=lambda i: abs(remaining[i] - lam))
        worst = max(worst, abs(remaining.pop(j) - lam) / (1.0 + abs(lam)))
    if remaining:
        top_tangent = float(np.max(lam_tangent))
        floor_gap = top_tangent - min(remaining)
        if floor_gap > 0.0:
            worst = max(worst, floor_gap / (1.0 + abs(top_tangent)))
    return _report(name, worst, tolerance, len(lam_tangent))


def strict_saddle_check(beta, n=3, p=2, *, tolerance=1e-10, name="strict_saddle"):
    """Confirm the origin is a strict saddle of the penalty for a constant objective.

    X = 0 is an infeasible stationary point of h; there the penalty Hessian
    is exactly -beta times the identity, so its smallest eigenvalue -beta
    clears the -beta/24 escape threshold. Checked by dense eigensolve.
    """
    if not (beta > 0.0):
        raise DimensionError(f"beta must be positive, got {beta}")
    model = ExPenModel(constant_make(n, p), beta)
    H = assemble_hessian(model, np.zeros((n, p)))
    lam_min = float(np.linalg.eigvalsh(H)[0])
    err = abs(lam_min + beta) / (1.0 + beta)
    if lam_min > -beta / 24.0:
        err = max(err, (lam_min + beta / 24.0) / (1.0 + beta))
    return _report(name, err, tolerance, n * p)


def inner_identity_check(obj, X, samples=50, *, seed=0, tolerance=1e-10, smoothed_grad_fn=None, name="inner_identity"):
    """Two-sided evaluation of the penalty-free gradient identity.

    For any X, with R = X^T X - I and G the objective gradient at the mapped
    point: <X R, grad g(X)> = -(3/2) <R^2, sym(X^T G)>, where g is the
    penalty-free smoothed objective. Evaluated at X and at `samples` - 1
    random points of the same shape. The identity is beta-free, so the check
    runs on the objective bundle directly; smoothed_grad_fn exists to inject
    a corrupted gradient for negative controls.
    """
    X = np.asarray(X, dtype=float)
    gfun = smoothed_grad_fn if smoothed_grad_fn is not None else smoothed_grad
    rng = np.random.default_rng(seed)
    points = [X]
    scale = max(1.0, fnorm(X))
    for _ in range(max(samples - 1, 0)):
        points.append(rng.standard_normal(X.shape) * (scale / np.sqrt(X.size)))
    worst = 0.0
    for Xi in points:
        R = Xi.T @ Xi - np.eye(Xi.shape[1])
        G = np.asarray(obj.gradient(apen_map(Xi)), dtype=float)
        lhs = inner(Xi @ R, gfun(obj, Xi))
        rhs = -1.5 * inner(R @ R, sym(Xi.T @ G))
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs)))
    return _report(name, worst, tolerance, len(points))


def selfadjoint_check(X, samples=50, *, seed=0, tolerance=1e-12, operator=None, name="selfadjoint"):
    """Check self-adjointness of the smoothing-map Jacobian at X.

    |<J(W), Z> - <W, J(Z)>| normalized by ||W|| ||Z|| (1 + ||X||^2) over
    random pairs; operator is injectable for negative controls.
    """
    X = np.asarray(X, dtype=float)
    op = operator if operator is not None else jx_apply
    rng = np.random.default_rng(seed)
    scale = 1.0 + fnorm(X) ** 2
    worst = 0.0
    for _ in range(samples):
        W = rng.standard_normal(X.shape)
        Z = rng.standard_normal(X.shape)
        err = abs(inner(op(X, W), Z) - inner(W, op(X, Z)))
        worst = max(worst, err / (fnorm(W) * fnorm(Z) * scale))
    return _report(name, worst, tolerance, samples)
