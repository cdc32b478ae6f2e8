"""Shared helpers for the expen test suite."""

import itertools

import numpy as np

import expen as ep


def stiefel(n, p, seed):
    """Deterministic random point with orthonormal columns."""
    return ep.random_stiefel(ep.RandomSpec(n=n, p=p, seed=seed))


def near_stiefel(n, p, seed, scale=None):
    """Random point inside the feasibility-1/6 region around the manifold.

    The perturbation has unit Frobenius norm before scaling, so `scale`
    bounds the distance to the manifold directly.
    """
    rng = np.random.default_rng(seed + 10_000)
    if scale is None:
        scale = rng.uniform(0.002, 0.05)
    base = stiefel(n, p, seed)
    direction = rng.standard_normal((n, p))
    point = base + scale * direction / ep.fnorm(direction)
    assert ep.feasibility(point) <= 1.0 / 6.0
    return point


def brockett_bruteforce_min(obj, n, p):
    """Smallest objective value over all signed p-column selections of I_n.

    For diagonal coefficient matrices the constrained minimizers are signed
    selection matrices, so the minimum over this finite family is the global
    constrained minimum.
    """
    best = np.inf
    for rows in itertools.permutations(range(n), p):
        for signs in itertools.product((-1.0, 1.0), repeat=p):
            X = np.zeros((n, p))
            for j, (i, s) in enumerate(zip(rows, signs)):
                X[i, j] = s
            best = min(best, obj.value(X))
    return best


def newton_polish(model, X, iters=6, tol=1e-12):
    """Full-space Newton refinement of a near-stationary penalty iterate.

    The line-search solvers stall near the rounding floor of the penalty
    value (around 1e-7 in gradient norm at moderate scales); a few Newton
    steps on the dense Hessian push the gradient norm to ~1e-14, which the
    spectrum checker's stationarity precondition requires.
    """
    for _ in range(iters):
        g = model.grad(X)
        if ep.fnorm(g) <= tol:
            break
        H = ep.assemble_hessian(model, X)
        X = X - np.linalg.solve(H, g.ravel()).reshape(X.shape)
    return X


class CountingClock:
    """Deterministic clock stub: returns 0.0, 1.0, 2.0, ... per call."""

    def __init__(self):
        self.calls = 0

    def __call__(self):
        value = float(self.calls)
        self.calls += 1
        return value
