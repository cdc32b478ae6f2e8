"""Benchmark objectives as SmoothObjective bundles, plus reproducible initial points.

Two families: a simplified electronic-structure energy (nonlinear eigenvalue
problem) and the Brockett trace function. Both are deterministic, immutable,
and reentrant. Synthetic constant and linear objectives round out the set for
tests and verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateProjectionError, DimensionError, SamplingError
from .geometry import project_stiefel
from .linalg import inner, laplacian_1d, sym, tridiag_solve
from .model import SmoothObjective

__all__ = [
    "nleig_make",
    "brockett_make",
    "constant_make",
    "linear_make",
    "RandomSpec",
    "random_stiefel",
    "random_symmetric",
]


def nleig_make(n, p, alpha=1.0):
    """Nonlinear eigenvalue objective on n x p matrices.

    f(X) = (1/2) tr(X^T L X) + (alpha/4) rho^T L^{-1} rho, where L is the
    tridiagonal stencil diag 2 / off -1 and rho = diag(X X^T). The inverse is
    applied by an O(n) tridiagonal solve, never formed.

    Parameters
    ----------
    n, p : int
        Dimensions, n >= p >= 1.
    alpha : float
        Nonnegative coupling weight of the quartic term. The experiments
        leave it a free knob; 1.0 is the neutral default.
    """
    if not (n >= p >= 1):
        raise DimensionError(f"need n >= p >= 1, got n={n}, p={p}")
    if not (alpha >= 0.0):
        raise DimensionError(f"alpha must be nonnegative, got {alpha}")
    L = laplacian_1d(n)

    def value(X):
        quad = 0.5 * inner(X, L.matvec(X))
        if alpha == 0.0:
            return quad
        rho = np.einsum("ij,ij->i", X, X)
        z = tridiag_solve(L, rho)
        return quad + 0.25 * alpha * float(rho @ z)

    def gradient(X):
        g = L.matvec(X)
        if alpha != 0.0:
            rho = np.einsum("ij,ij->i", X, X)
            z = tridiag_solve(L, rho)
            g = g + alpha * (z[:, None] * X)
        return g

    def hess_vec(X, D):
        H = L.matvec(D)
        if alpha != 0.0:
            rho = np.einsum("ij,ij->i", X, X)
            z = tridiag_solve(L, rho)
            # diag(X D^T + D X^T) = 2 * rowwise dot of X and D
            w = tridiag_solve(L, 2.0 * np.einsum("ij,ij->i", X, D))
            H = H + alpha * (z[:, None] * D) + alpha * (w[:, None] * X)
        return H

    return SmoothObjective(n=n, p=p, value=value, gradient=gradient, hess_vec=hess_vec)


def brockett_make(B, C):
    """Brockett trace objective f(X) = (1/2) tr(X^T B X C) for symmetric B, C."""
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DimensionError(f"B must be square, got {B.shape}")
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionError(f"C must be square, got {C.shape}")
    if np.linalg.norm(B - B.T) > 1e-12 * (1.0 + np.linalg.norm(B)):
        raise DimensionError("B must be symmetric")
    if np.linalg.norm(C - C.T) > 1e-12 * (1.0 + np.linalg.norm(C)):
        raise DimensionError("C must be symmetric")
    n, p = B.shape[0], C.shape[0]
    if n < p:
        raise DimensionError(f"need n >= p, got n={n}, p={p}")

    def value(X):
        return 0.5 * inner(X, B @ X @ C)

    def gradient(X):
        return B @ X @ C

    def hess_vec(X, D):
        return B @ D @ C

    return SmoothObjective(n=n, p=p, value=value, gradient=gradient, hess_vec=hess_vec)


def constant_make(n, p, level=0.0):
    """Constant objective: value level, zero gradient and Hessian."""
    zero = lambda X: np.zeros((n, p))
    return SmoothObjective(
        n=n,
        p=p,
        value=lambda X: float(level),
        gradient=zero,
        hess_vec=lambda X, D: np.zeros((n, p)),
    )


def linear_make(C):
    """Linear objective f(X) = <C, X>."""
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] < C.shape[1]:
        raise DimensionError(f"C must be n x p with n >= p, got {C.shape}")
    n, p = C.shape
    return SmoothObjective(
        n=n,
        p=p,
        value=lambda X: inner(C, X),
        gradient=lambda X: C.copy(),
        hess_vec=lambda X, D: np.zeros((n, p)),
    )


def random_symmetric(n, seed):
    """Symmetrized standard-normal n x n matrix, O(1) entries, seed-deterministic."""
    rng = np.random.default_rng(seed)
    return sym(rng.standard_normal((n, n)))


@dataclass(frozen=True)
class RandomSpec:
    """Reproducible initial-point request: dimensions plus a seed."""

    n: int
    p: int
    seed: int

    def __post_init__(self):
        if not (self.n >= self.p >= 1):
            raise DimensionError(f"need n >= p >= 1, got n={self.n}, p={self.p}")
        if self.seed < 0:
            raise DimensionError(f"seed must be nonnegative, got {self.seed}")


def random_stiefel(spec):
    """Column-orthonormal matrix from projected standard-normal entries.

    Deterministic in the seed. A rank-deficient draw (probability zero) is
    retried with an incremented seed up to 3 times.
    """
    if not isinstance(spec, RandomSpec):
        raise DimensionError("random_stiefel expects a RandomSpec")
    for attempt in range(4):
        rng = np.random.default_rng(spec.seed + attempt)
        Z = rng.standard_normal((spec.n, spec.p))
        try:
            return project_stiefel(Z)
        except DegenerateProjectionError:
            continue
    raise SamplingError(f"no full-rank draw after 4 attempts from seed {spec.seed}")
