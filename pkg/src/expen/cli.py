"""Benchmark driver: build a problem, solve repeatedly, emit table rows and traces.

Protocol per run: for repeat r the initial point is drawn from seed + r, the
penalty parameter follows the ||grad f(X0)||_F / 10 rule unless overridden,
the solver runs to the gradient tolerance, and the final iterate is projected
onto the manifold before scoring. Numeric columns are averaged over repeats.

Exit codes: 0 success, 1 invalid run specification, 2 solver failure on all
repeats.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional

from .exceptions import DimensionError, ExPenError
from .model import ExPenModel, default_beta
from .problems import RandomSpec, brockett_make, nleig_make, random_stiefel, random_symmetric
from .solvers import SolverConfig, Termination, frcg_solve, gd_solve

__all__ = ["RunSpec", "TableRow", "BenchResult", "run_benchmark", "emit_outputs", "main"]

_SOLVERS = {"frcg": frcg_solve, "gd": gd_solve}
_PROBLEMS = ("nleig", "brockett")
_FORMATS = ("csv", "json", "both")

TABLE_HEADER = "solver,fval,iteration,stationarity,feasibility,cpu_seconds"
TRACE_HEADER = "k,h,grad_h_norm,feasibility,fval_gap"


def _fmt(x):
    # 9 significant digits for every float column
    return f"{float(x):.9g}"


@dataclass(frozen=True)
class RunSpec:
    """Validated benchmark request."""

    problem: str
    n: int
    p: int
    alpha: float = 1.0
    seed: int = 0
    repeats: int = 1
    beta_override: Optional[float] = None
    grad_tol: float = 1e-3
    max_iters: int = 10000
    solver: str = "frcg"

    def __post_init__(self):
        if self.problem not in _PROBLEMS:
            raise DimensionError(f"unknown problem {self.problem!r}, expected one of {_PROBLEMS}")
        if self.solver not in _SOLVERS:
            raise DimensionError(f"unknown solver {self.solver!r}, expected one of {tuple(_SOLVERS)}")
        if not (self.n >= self.p >= 1):
            raise DimensionError(f"need n >= p >= 1, got n={self.n}, p={self.p}")
        if self.problem == "nleig" and not (self.alpha >= 0.0):
            raise DimensionError(f"alpha must be nonnegative, got {self.alpha}")
        if self.seed < 0:
            raise DimensionError(f"seed must be nonnegative, got {self.seed}")
        if self.repeats < 1:
            raise DimensionError(f"repeats must be >= 1, got {self.repeats}")
        if self.beta_override is not None and not (self.beta_override > 0.0):
            raise DimensionError(f"beta must be positive, got {self.beta_override}")
        if not (self.grad_tol >= 0.0):
            raise DimensionError(f"grad_tol must be nonnegative, got {self.grad_tol}")
        if self.max_iters < 1:
            raise DimensionError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class TableRow:
    """One averaged result row, mirroring the benchmark table schema."""

    solver: str
    fval: float
    iteration: float
    stationarity: float
    feasibility: float
    cpu_seconds: float


@dataclass(frozen=True)
class BenchResult:
    """Everything a benchmark run produced, before serialization."""

    row: TableRow
    f_ref: float
    betas: tuple
    terminations: tuple
    reports: tuple
    traces: Optional[tuple]


def _build_objective(spec):
    if spec.problem == "nleig":
        return nleig_make(spec.n, spec.p, spec.alpha)
    # symmetric random Brockett data, streams separated from the X0 seeds
    B = random_symmetric(spec.n, [spec.seed, 1])
    C = random_symmetric(spec.p, [spec.seed, 2])
    return brockett_make(B, C)


def run_benchmark(spec, *, trace=False, clock=time.perf_counter):
    """Execute a RunSpec and aggregate the repeats into a TableRow.

    The clock is injectable so tests can pin cpu_seconds; everything else is
    fully determined by the RunSpec argument.
    """
    obj = _build_objective(spec)
    solve = _SOLVERS[spec.solver]
    reports = []
    betas = []
    for r in range(spec.repeats):
        X0 = random_stiefel(RandomSpec(spec.n, spec.p, spec.seed + r))
        beta = spec.beta_override if spec.beta_override is not None else default_beta(obj, X0)
        model = ExPenModel(obj, beta)
        config = SolverConfig(
            grad_tol=spec.grad_tol, max_iters=spec.max_iters, trace_enabled=trace
        )
        reports.append(solve(model, X0, config, clock=clock))
        betas.append(beta)

    f_ref = min(rep.fval for rep in reports)
    k = float(len(reports))
    row = TableRow(
        solver=spec.solver,
        fval=sum(rep.fval for rep in reports) / k,
        iteration=sum(rep.iterations for rep in reports) / k,
        stationarity=sum(rep.stationarity for rep in reports) / k,
        feasibility=sum(rep.feasibility for rep in reports) / k,
        cpu_seconds=sum(rep.wall_seconds for rep in reports) / k,
    )
    traces = None
    if trace:
        traces = tuple(
            tuple((t.k, t.h_val, t.grad_h_norm, t.feas, t.f_val - f_ref) for t in rep.trace)
            for rep in reports
        )
    return BenchResult(
        row=row,
        f_ref=f_ref,
        betas=tuple(betas),
        terminations=tuple(rep.termination.value for rep in reports),
        reports=tuple(reports),
        traces=traces,
    )


def emit_outputs(rows, traces, fmt, destination, *, metadata=None):
    """Write table and trace files under `destination`; returns the paths written.

    CSV columns and headers are fixed; floats carry 9 significant digits.
    JSON mirrors the TableRow fields exactly so rows round-trip.
    """
    if not rows:
        raise DimensionError("emit_outputs needs at least one row")
    if fmt not in _FORMATS:
        raise DimensionError(f"unknown format {fmt!r}, expected one of {_FORMATS}")
    try:
        os.makedirs(destination, exist_ok=True)
    except OSError as exc:
        raise ExPenError(f"cannot create output directory {destination!r}: {exc}") from exc

    paths = []

    def _write(relpath, text):
        path = os.path.join(destination, relpath)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise ExPenError(f"cannot write {path!r}: {exc}") from exc
        paths.append(path)

    if fmt in ("csv", "both"):
        lines = [TABLE_HEADER]
        for row in rows:
            lines.append(
                ",".join(
                    [
                        row.solver,
                        _fmt(row.fval),
                        _fmt(row.iteration),
                        _fmt(row.stationarity),
                        _fmt(row.feasibility),
                        _fmt(row.cpu_seconds),
                    ]
                )
            )
        _write("table.csv", "\n".join(lines) + "\n")
        if traces:
            for r, rows_r in enumerate(traces):
                tlines = [TRACE_HEADER]
                for k, h, gnorm, feas, gap in rows_r:
                    tlines.append(
                        f"{int(k)},{_fmt(h)},{_fmt(gnorm)},{_fmt(feas)},{_fmt(gap)}"
                    )
                _write(f"trace_{r:03d}.csv", "\n".join(tlines) + "\n")

    if fmt in ("json", "both"):
        doc = {
            "rows": [asdict(row) for row in rows],
            "metadata": metadata if metadata is not None else {},
        }
        _write("table.json", json.dumps(doc, sort_keys=True, indent=2) + "\n")

    return paths


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the exit-code contract
    # reserves 2 for solver failure, so parse errors become exit 1 instead
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(
        prog="expen-bench",
        description="Penalty-model benchmark runner for orthogonality-constrained problems.",
    )
    parser.add_argument("--problem", required=True, choices=list(_PROBLEMS))
    parser.add_argument("--n", type=int, required=True, help="number of rows")
    parser.add_argument("--p", type=int, required=True, help="number of columns")
    parser.add_argument("--alpha", type=float, default=1.0, help="nleig coupling weight")
    parser.add_argument("--seed", type=int, default=0, help="base seed; repeat r uses seed+r")
    parser.add_argument("--repeats", type=int, default=1)
    parser.add_argument("--beta", type=float, default=None, help="penalty override (default: rule)")
    parser.add_argument("--grad-tol", type=float, default=1e-3)
    parser.add_argument("--max-iters", type=int, default=10000)
    parser.add_argument("--solver", choices=sorted(_SOLVERS), default="frcg")
    parser.add_argument("--trace", action="store_true", help="write per-iteration trace CSVs")
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--format", choices=list(_FORMATS), default="both")
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        spec = RunSpec(
            problem=args.problem,
            n=args.n,
            p=args.p,
            alpha=args.alpha,
            seed=args.seed,
            repeats=args.repeats,
            beta_override=args.beta,
            grad_tol=args.grad_tol,
            max_iters=args.max_iters,
            solver=args.solver,
        )
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ExPenError, ValueError) as exc:
        print(f"error: invalid run specification: {exc}", file=sys.stderr)
        return 1

    try:
        result = run_benchmark(spec, trace=args.trace)
    except ExPenError as exc:
        print(f"error: benchmark run failed: {exc}", file=sys.stderr)
        return 2

    metadata = {
        "spec": asdict(spec),
        "f_ref": result.f_ref,
        "betas": list(result.betas),
        "terminations": list(result.terminations),
    }
    paths = emit_outputs(
        [result.row], result.traces, args.format, args.out_dir, metadata=metadata
    )

    row = result.row
    print(TABLE_HEADER.replace(",", "  "))
    print(
        "  ".join(
            [
                row.solver,
                _fmt(row.fval),
                _fmt(row.iteration),
                _fmt(row.stationarity),
                _fmt(row.feasibility),
                _fmt(row.cpu_seconds),
            ]
        )
    )
    for path in paths:
        print(f"wrote {path}")

    if all(t == Termination.LINE_SEARCH_FAILURE.value for t in result.terminations):
        print("error: line search failed on every repeat", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
