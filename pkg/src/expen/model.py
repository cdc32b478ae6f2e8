"""Smooth objective bundles and the exact-penalty oracle.

The penalty replaces minimization of f over column-orthonormal X by
unconstrained minimization of

    h(X) = f(X A(X)) + (beta/4) ||X^T X - I||_F^2,
    A(X) = (3/2) I - (1/2) X^T X,

which agrees with f on the manifold. The gradient and Hessian-vector oracles
below are closed-form: one objective gradient (or Hessian-vector) call plus a
fixed number of n x p by p x p products per evaluation. X^T X, the mapped
point X A(X), and the mapped gradient are computed once per call and shared
across terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import CapabilityError, DimensionError
from .linalg import fnorm, sym

__all__ = [
    "SmoothObjective",
    "ExPenModel",
    "apen_map",
    "jx_apply",
    "smoothed_value",
    "smoothed_grad",
    "default_beta",
]


@dataclass(frozen=True)
class SmoothObjective:
    """Oracle bundle for a smooth objective on n x p matrices.

    Parameters
    ----------
    n, p : int
        Matrix dimensions, n >= p >= 1.
    value : callable
        X -> float.
    gradient : callable
        X -> n x p array, the Euclidean gradient.
    hess_vec : callable, optional
        (X, D) -> n x p array, the Euclidean Hessian applied to D. Absent
        for first-order-only objectives; second-order operations then raise
        CapabilityError instead of silently finite-differencing.
    """

    n: int
    p: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hess_vec: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if not (self.n >= self.p >= 1):
            raise DimensionError(f"need n >= p >= 1, got n={self.n}, p={self.p}")


def _check_point(X, n, p, name="X"):
    X = np.asarray(X, dtype=float)
    if X.shape != (n, p):
        raise DimensionError(f"{name} must have shape ({n}, {p}), got {X.shape}")
    return X


def _as_pair(X, D):
    X = np.asarray(X, dtype=float)
    D = np.asarray(D, dtype=float)
    if X.ndim != 2 or X.shape[0] < X.shape[1]:
        raise DimensionError(f"point must be n x p with n >= p, got {X.shape}")
    if D.shape != X.shape:
        raise DimensionError(f"direction shape {D.shape} does not match point shape {X.shape}")
    return X, D


def apen_map(X):
    """The smoothing map X -> X A(X) with A(X) = (3/2) I - (1/2) X^T X.

    Fixes every column-orthonormal X.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < X.shape[1]:
        raise DimensionError(f"apen_map expects n x p with n >= p, got {X.shape}")
    S = X.T @ X
    return 1.5 * X - 0.5 * (X @ S)


def jx_apply(X, D):
    """Apply the Jacobian of apen_map at X to D: D A(X) - X sym(D^T X).

    Linear and self-adjoint in D.
    """
    X, D = _as_pair(X, D)
    S = X.T @ X
    return 1.5 * D - 0.5 * (D @ S) - X @ sym(D.T @ X)


def smoothed_value(obj, X):
    """f evaluated through the smoothing map: f(X A(X))."""
    X = _check_point(X, obj.n, obj.p)
    return float(obj.value(apen_map(X)))


def smoothed_grad(obj, X):
    """Gradient of X -> f(X A(X)): G A(X) - X sym(X^T G) with G = grad f(X A(X)).

    This is the penalty-free part of the model gradient; the identity checks
    in the verify module exercise it directly.
    """
    X = _check_point(X, obj.n, obj.p)
    S = X.T @ X
    G = np.asarray(obj.gradient(1.5 * X - 0.5 * (X @ S)), dtype=float)
    return 1.5 * G - 0.5 * (G @ S) - X @ sym(X.T @ G)


def default_beta(obj, X0):
    """Penalty parameter rule ||grad f(X0)||_F / 10 for an initial point X0.

    Falls back to 1.0 when the gradient vanishes at X0 (the rule would give
    an invalid beta = 0).
    """
    X0 = _check_point(X0, obj.n, obj.p, "X0")
    b = fnorm(obj.gradient(X0)) / 10.0
    return b if b > 0.0 else 1.0


@dataclass(frozen=True)
class ExPenModel:
    """The penalty oracle h, grad h, and hess h [D] for a SmoothObjective.

    Immutable; all oracle calls are pure given a pure objective.
    """

    objective: SmoothObjective
    beta: float

    def __post_init__(self):
        if not isinstance(self.objective, SmoothObjective):
            raise DimensionError("objective must be a SmoothObjective")
        if not (self.beta > 0.0 and np.isfinite(self.beta)):
            raise DimensionError(f"beta must be positive and finite, got {self.beta}")

    @property
    def n(self):
        return self.objective.n

    @property
    def p(self):
        return self.objective.p

    def value(self, X):
        """h(X) = f(X A(X)) + (beta/4) ||X^T X - I||_F^2."""
        X = _check_point(X, self.n, self.p)
        S = X.T @ X
        R = S - np.eye(self.p)
        fv = float(self.objective.value(1.5 * X - 0.5 * (X @ S)))
        return fv + 0.25 * self.beta * float(np.vdot(R, R))

    def grad(self, X):
        """Closed-form gradient of h.

        grad h(X) = G A(X) - X sym(X^T G) + beta X (X^T X - I),
        with G the objective gradient at the mapped point X A(X). Equals the
        Riemannian gradient of f whenever X is column-orthonormal.
        """
        X = _check_point(X, self.n, self.p)
        S = X.T @ X
        R = S - np.eye(self.p)
        G = np.asarray(self.objective.gradient(1.5 * X - 0.5 * (X @ S)), dtype=float)
        return 1.5 * G - 0.5 * (G @ S) - X @ sym(X.T @ G) + self.beta * (X @ R)

    def hess_vec(self, X, D):
        """Closed-form Hessian of h applied to a direction D.

        Requires the objective to provide hess_vec; the objective Hessian is
        evaluated at the mapped point X A(X) and sandwiched between two
        Jacobian applications, followed by the curvature terms of the map and
        of the penalty.
        """
        if self.objective.hess_vec is None:
            raise CapabilityError("objective provides no hess_vec oracle")
        X = _check_point(X, self.n, self.p)
        D = _check_point(D, self.n, self.p, "D")
        S = X.T @ X
        R = S - np.eye(self.p)
        Y = 1.5 * X - 0.5 * (X @ S)
        G = np.asarray(self.objective.gradient(Y), dtype=float)
        JD = 1.5 * D - 0.5 * (D @ S) - X @ sym(D.T @ X)
        HJD = np.asarray(self.objective.hess_vec(Y, JD), dtype=float)
        JHJD = 1.5 * HJD - 0.5 * (HJD @ S) - X @ sym(HJD.T @ X)
        return (
            JHJD
            - D @ sym(X.T @ G)
            - X @ sym(D.T @ G)
            - G @ sym(D.T @ X)
            + self.beta * (2.0 * (X @ sym(X.T @ D)) + D @ R)
        )

    def g_value(self, X):
        """Penalty-free part f(X A(X))."""
        return smoothed_value(self.objective, X)

    def g_grad(self, X):
        """Gradient of the penalty-free part."""
        return smoothed_grad(self.objective, X)
