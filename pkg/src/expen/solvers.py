"""Unconstrained solvers for the penalty model.

A strong Wolfe line search drives two descent methods: nonlinear
conjugate gradient with the Fletcher-Reeves ratio, and plain gradient
descent as a baseline. Both terminate on the penalty-gradient norm and
report post-projection quantities, since the benchmark protocol projects
the final iterate onto the manifold before scoring it.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .exceptions import DimensionError, LineSearchError, NonDescentError
from .geometry import feasibility, project_stiefel, riemannian_grad
from .linalg import fnorm, inner

__all__ = [
    "SolverConfig",
    "IterTrace",
    "Termination",
    "SolverReport",
    "strong_wolfe",
    "frcg_solve",
    "gd_solve",
]

# Hard ceilings of the line search: trial steps beyond _STEP_CAP or more than
# _MAX_ZOOM interval refinements mean the search failed.
_STEP_CAP = 1e10
_MAX_ZOOM = 60
_MAX_EXPANSIONS = 200

# Warm-start clamp for the first trial step of each iteration.
_TRIAL_MIN = 1e-12
_TRIAL_MAX = 1e6

# Step-size bound whose violation is logged (never enforced): the convergence
# theory assumes eta * ||D|| stays below this.
_STEP_NORM_BOUND = 1.0 / 24.0


@dataclass(frozen=True)
class SolverConfig:
    """Line-search and termination parameters.

    delta and sigma are the sufficient-decrease and curvature constants of
    the strong Wolfe conditions, constrained to 0 < delta <= sigma <= 1/2.
    """

    delta: float = 1e-4
    sigma: float = 0.4
    grad_tol: float = 1e-3
    max_iters: int = 10000
    initial_step: float = 1.0
    trace_enabled: bool = False

    def __post_init__(self):
        if not (0.0 < self.delta <= self.sigma <= 0.5):
            raise DimensionError(
                f"need 0 < delta <= sigma <= 1/2, got delta={self.delta}, sigma={self.sigma}"
            )
        if not (self.grad_tol >= 0.0):
            raise DimensionError(f"grad_tol must be nonnegative, got {self.grad_tol}")
        if not (self.max_iters >= 1):
            raise DimensionError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (self.initial_step > 0.0):
            raise DimensionError(f"initial_step must be positive, got {self.initial_step}")


@dataclass(frozen=True)
class IterTrace:
    """One recorded iteration.

    Fields describe the iterate X_k (h_val, grad_h_norm, feas, f_val) and the
    step taken from it (step, dir_norm, zoutendijk, the summand
    <grad h, D>^2 / ||D||^2 of the convergence theory's series). The terminal
    row carries the final iterate with zero step fields.
    """

    k: int
    h_val: float
    grad_h_norm: float
    feas: float
    step: float
    dir_norm: float
    zoutendijk: float
    f_val: float


class Termination(enum.Enum):
    GRAD_TOL = "GradTol"
    MAX_ITERS = "MaxIters"
    LINE_SEARCH_FAILURE = "LineSearchFailure"


@dataclass(frozen=True, eq=False)
class SolverReport:
    """Outcome of a solver run.

    final_point, fval, stationarity, and feasibility describe the iterate
    after projection onto the manifold; raw_point and the raw_* fields keep
    the last iterate as the loop left it, so certified-bound checks can see
    both sides. descent_held and step_bound_held audit the convergence
    theory's per-step preconditions (strict descent; eta*||D|| <= 1/24).
    """

    final_point: np.ndarray
    fval: float
    iterations: int
    stationarity: float
    feasibility: float
    wall_seconds: float
    termination: Termination
    raw_point: np.ndarray
    raw_grad_h_norm: float
    raw_feasibility: float
    descent_held: bool
    step_bound_held: bool
    trace: Optional[tuple] = None


def strong_wolfe(phi, dphi, config):
    """Find a step satisfying the strong Wolfe conditions for phi.

    Conditions at the returned eta:
        phi(eta) <= phi(0) + delta * eta * dphi(0)
        |dphi(eta)| <= -sigma * dphi(0)

    Bracketing starts from config.initial_step and doubles; an interval
    containing acceptable points is then refined by bisection. Raises
    NonDescentError when dphi(0) >= 0, LineSearchError when the trial step
    exceeds 1e10 or refinement exhausts its budget.
    """
    d0 = dphi(0.0)
    if d0 >= 0.0:
        raise NonDescentError(f"directional derivative at 0 is {d0:.3e}, not a descent direction")
    f0 = phi(0.0)
    delta, sigma = config.delta, config.sigma

    def zoom(lo, hi, flo):
        for _ in range(_MAX_ZOOM):
            t = 0.5 * (lo + hi)
            ft = phi(t)
            if ft > f0 + delta * t * d0 or ft >= flo:
                hi = t
            else:
                dt = dphi(t)
                if abs(dt) <= -sigma * d0:
                    return t
                if dt * (hi - lo) >= 0.0:
                    hi = lo
                lo, flo = t, ft
        raise LineSearchError(f"zoom exhausted after {_MAX_ZOOM} refinements")

    t_prev, f_prev = 0.0, f0
    t = config.initial_step
    for expansion in range(_MAX_EXPANSIONS):
        if t > _STEP_CAP:
            raise LineSearchError(f"trial step {t:.3e} exceeded cap {_STEP_CAP:.0e}")
        ft = phi(t)
        if ft > f0 + delta * t * d0 or (expansion > 0 and ft >= f_prev):
            return zoom(t_prev, t, f_prev)
        dt = dphi(t)
        if abs(dt) <= -sigma * d0:
            return t
        if dt >= 0.0:
            return zoom(t, t_prev, ft)
        t_prev, f_prev = t, ft
        t *= 2.0
    raise LineSearchError(f"bracketing exhausted after {_MAX_EXPANSIONS} expansions")


def _descent_loop(model, X0, config, use_cg, clock):
    X = np.array(X0, dtype=float, copy=True)
    if X.shape != (model.n, model.p):
        raise DimensionError(f"X0 must have shape ({model.n}, {model.p}), got {X.shape}")
    obj = model.objective

    start = clock()
    h = model.value(X)
    g = model.grad(X)
    gnorm = fnorm(g)
    D = -g
    gD = -(gnorm * gnorm)

    trace = [] if config.trace_enabled else None
    descent_held = True
    step_bound_held = True
    eta_prev = None
    gD_prev = None
    termination = Termination.MAX_ITERS
    k = 0

    while True:
        if gnorm <= config.grad_tol:
            termination = Termination.GRAD_TOL
            break
        if k >= config.max_iters:
            termination = Termination.MAX_ITERS
            break

        gD = inner(g, D)
        dnorm = fnorm(D)
        # restart guard: the theory needs strict descent, which the FR update
        # can lose; reset to steepest descent when it does
        if gD >= -1e-12 * gnorm * dnorm:
            D = -g
            dnorm = gnorm
            gD = -(gnorm * gnorm)
        if gD >= 0.0:
            descent_held = False

        if eta_prev is None:
            trial = config.initial_step
        else:
            trial = eta_prev * gD_prev / gD
            trial = min(max(trial, _TRIAL_MIN), _TRIAL_MAX)

        fcache = {}
        gcache = {}

        def phi(t, X=X, D=D, h=h):
            if t == 0.0:
                return h
            if t not in fcache:
                fcache[t] = model.value(X + t * D)
            return fcache[t]

        def dphi(t, X=X, D=D, g=g):
            if t == 0.0:
                return inner(g, D)
            if t not in gcache:
                gcache[t] = model.grad(X + t * D)
            return inner(gcache[t], D)

        try:
            eta = strong_wolfe(phi, dphi, replace(config, initial_step=trial))
        except LineSearchError:
            termination = Termination.LINE_SEARCH_FAILURE
            break

        if trace is not None:
            trace.append(
                IterTrace(
                    k=k,
                    h_val=h,
                    grad_h_norm=gnorm,
                    feas=feasibility(X),
                    step=eta,
                    dir_norm=dnorm,
                    zoutendijk=(gD * gD) / (dnorm * dnorm),
                    f_val=float(obj.value(X)),
                )
            )
        if eta * dnorm > _STEP_NORM_BOUND:
            step_bound_held = False

        X = X + eta * D
        h = fcache.get(eta)
        if h is None:
            h = model.value(X)
        g_next = gcache.get(eta)
        if g_next is None:
            g_next = model.grad(X)
        gnorm_next = fnorm(g_next)

        if use_cg:
            tau = (gnorm_next * gnorm_next) / (gnorm * gnorm)
            D = -g_next + tau * D
        else:
            D = -g_next
        eta_prev, gD_prev = eta, gD
        g, gnorm = g_next, gnorm_next
        k += 1

    if trace is not None:
        trace.append(
            IterTrace(
                k=k,
                h_val=h,
                grad_h_norm=gnorm,
                feas=feasibility(X),
                step=0.0,
                dir_norm=0.0,
                zoutendijk=0.0,
                f_val=float(obj.value(X)),
            )
        )

    wall = clock() - start
    raw_feas = feasibility(X)
    P = project_stiefel(X)
    return SolverReport(
        final_point=P,
        fval=float(obj.value(P)),
        iterations=k,
        stationarity=fnorm(riemannian_grad(obj, P)),
        feasibility=feasibility(P),
        wall_seconds=wall,
        termination=termination,
        raw_point=X,
        raw_grad_h_norm=gnorm,
        raw_feasibility=raw_feas,
        descent_held=descent_held,
        step_bound_held=step_bound_held,
        trace=tuple(trace) if trace is not None else None,
    )


def frcg_solve(model, X0, config, *, clock=time.perf_counter):
    """Nonlinear conjugate gradient on the penalty model.

    Directions follow D_{k+1} = -grad h(X_{k+1}) + tau_k D_k with the
    Fletcher-Reeves ratio tau_k = ||grad h(X_{k+1})||^2 / ||grad h(X_k)||^2,
    restarted to steepest descent whenever descent degrades. Steps satisfy
    the strong Wolfe conditions. Line-search failure is a terminal status
    carrying the last iterate, not an exception.

    The clock parameter exists so callers can inject a deterministic timer;
    wall_seconds covers the iteration loop only.
    """
    return _descent_loop(model, X0, config, use_cg=True, clock=clock)


def gd_solve(model, X0, config, *, clock=time.perf_counter):
    """Steepest descent baseline with the same line search and reporting."""
    return _descent_loop(model, X0, config, use_cg=False, clock=clock)
