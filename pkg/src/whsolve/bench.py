"""Convergence sweeps over method x case x N, with CSV and JSON output.

For each N a solve runs on the grid from
:func:`whsolve.grid.grid_for_interval` (or ``N`` Nyström nodes), and the
absolute error is read at the node nearest to each probe
``a + p*(b - a)``. Slopes are least-squares fits of ``log(error)`` against
``log(N)``.
"""

import csv
import enum
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from whsolve.cases import get_case
from whsolve.errors import WhsolveError
from whsolve.grid import grid_for_interval
from whsolve.spectral import HilbertMethod
from whsolve.solvers import (
    SolverConfig,
    solve_fredholm_quadrature,
    solve_fredholm_voronin,
    solve_fredholm_wh,
)

logger = logging.getLogger(__name__)

CSV_HEADER = ["case", "method", "N", "probe_frac", "probe_x", "abs_error", "cpu_seconds", "iterations"]
DEFAULT_PROBES = (0.1, 0.5, 0.9)
#: Errors below this are treated as round-off and left out of slope fits.
ERROR_FLOOR = 100 * np.finfo(float).eps


class Method(enum.Enum):
    WH_SIGN = "wh-sign"
    WH_SINC = "wh-sinc"
    VORONIN = "voronin"
    QUADRATURE = "quadrature"


DEFAULT_N = {
    Method.WH_SIGN: [2 ** e for e in range(9, 15)],
    Method.WH_SINC: [2 ** e for e in range(9, 15)],
    Method.VORONIN: [2 ** e for e in range(9, 15)],
    Method.QUADRATURE: [2 ** e for e in range(7, 13)],
}


@dataclass(frozen=True)
class RunSpec:
    """One sweep.

    For the quadrature method the entries of ``N_list`` are node counts.
    """

    case: str
    method: Method
    N_list: tuple
    a: Optional[float] = None
    b: Optional[float] = None
    config: SolverConfig = SolverConfig()
    probes: tuple = DEFAULT_PROBES
    quad_order: int = 4

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "N_list", tuple(int(n) for n in self.N_list))
        object.__setattr__(self, "probes", tuple(float(p) for p in self.probes))
        if not self.N_list or any(n2 <= n1 for n1, n2 in zip(self.N_list, self.N_list[1:])):
            raise ValueError(f"N_list must be non-empty and strictly increasing, got {self.N_list}")
        if not self.probes or any(not 0.0 < p < 1.0 for p in self.probes):
            raise ValueError(f"probes must lie strictly inside (0, 1), got {self.probes}")


@dataclass(frozen=True)
class Row:
    case: str
    method: str
    N: int
    probe_frac: float
    probe_x: float
    abs_error: float
    cpu_seconds: float
    iterations: int
    converged: bool = True
    error: Optional[str] = None


@dataclass
class ConvergenceReport:
    case: str
    method: str
    rows: list = field(default_factory=list)
    slopes: dict = field(default_factory=dict)

    @property
    def all_converged(self):
        return all(r.converged and r.error is None for r in self.rows)

    def errors_at(self, N):
        """Probe errors at one N, ordered as the probes."""
        return [r.abs_error for r in self.rows if r.N == N]


def method_config(method, config):
    """Config adjusted to the Hilbert transform a method requires."""
    method = Method(method)
    if method is Method.WH_SINC:
        return replace(config, hilbert=HilbertMethod.SINC)
    if method in (Method.WH_SIGN, Method.VORONIN):
        return replace(config, hilbert=HilbertMethod.SIGN)
    return config


def solve_case(problem, method, N, config=SolverConfig(), quad_order=4):
    """Solve one built-in problem with one method at resolution N."""
    method = Method(method)
    if method is Method.QUADRATURE:
        return solve_fredholm_quadrature(problem, N, quad_order)
    cfg = method_config(method, config)
    grid = grid_for_interval(problem.a, problem.b, N, cfg.m_trunc)
    if method is Method.VORONIN:
        return solve_fredholm_voronin(problem, grid, cfg)
    return solve_fredholm_wh(problem, grid, cfg)


def fit_slope(Ns, errors):
    """Least-squares slope of ``log(error)`` vs ``log(N)``.

    Non-finite errors and errors below ``ERROR_FLOOR`` are skipped; returns
    None with fewer than two usable points.
    """
    pts = [(n, e) for n, e in zip(Ns, errors) if np.isfinite(e) and e >= ERROR_FLOOR]
    if len(pts) < 2:
        return None
    n, e = np.array(pts, dtype=float).T
    return float(np.polyfit(np.log(n), np.log(e), 1)[0])


def _one(spec, problem, N):
    target = [problem.a + p * problem.length for p in spec.probes]
    try:
        t0 = time.perf_counter()
        sol = solve_case(problem, spec.method, N, spec.config, spec.quad_order)
        cpu = time.perf_counter() - t0
    except WhsolveError as exc:
        logger.error("%s/%s N=%d failed: %s", spec.case, spec.method.value, N, exc)
        return [
            Row(spec.case, spec.method.value, N, p, x, math.nan, math.nan, 0, False, str(exc))
            for p, x in zip(spec.probes, target)
        ]
    rows = []
    for p, x in zip(spec.probes, target):
        val, node = sol.value_near(x)
        err = abs(val - float(problem.analytic_solution(node)))
        rows.append(Row(spec.case, spec.method.value, N, p, float(node), float(err),
                        max(cpu, 1e-9), sol.iterations_used, sol.converged))
    logger.info("%s/%s N=%d errors %s (%d it, %.3fs)", spec.case, spec.method.value, N,
                " ".join(f"{r.abs_error:.2e}" for r in rows), sol.iterations_used, cpu)
    return rows


def thread_count():
    """Sweep parallelism from ``WHSOLVE_THREADS`` (default 1)."""
    raw = os.environ.get("WHSOLVE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer WHSOLVE_THREADS=%r", raw)
        return 1


def run_sweep(spec, threads=None):
    """Run every N of ``spec`` and fit one slope per probe.

    Parameters
    ----------
    spec : RunSpec
    threads : int, optional
        Worker count; defaults to :func:`thread_count`.

    Returns
    -------
    ConvergenceReport
    """
    problem = get_case(spec.case, spec.a, spec.b)
    threads = threads or thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda n: _one(spec, problem, n), spec.N_list))
    else:
        chunks = [_one(spec, problem, n) for n in spec.N_list]
    rows = [r for chunk in chunks for r in chunk]
    report = ConvergenceReport(spec.case, spec.method.value, rows)
    for p in spec.probes:
        sub = [r for r in rows if r.probe_frac == p and r.error is None]
        report.slopes[p] = fit_slope([r.N for r in sub], [r.abs_error for r in sub])
    return report


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(reports, path):
    """Write one CSV row per (N, probe).

    Parameters
    ----------
    reports : ConvergenceReport or list of ConvergenceReport
    path : str or path-like
    """
    if isinstance(reports, ConvergenceReport):
        reports = [reports]
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for rep in reports:
                for r in rep.rows:
                    w.writerow([_fmt(getattr(r, k)) for k in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a file written by :func:`emit_csv` into rows."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(Row(
                rec["case"], rec["method"], int(rec["N"]), float(rec["probe_frac"]),
                float(rec["probe_x"]), float(rec["abs_error"]), float(rec["cpu_seconds"]),
                int(rec["iterations"]),
            ))
    return rows


def emit_profile(reports):
    """JSON summary keyed by ``case/method``, keys sorted.

    Each entry carries the per-probe slopes, the best probe error and the
    total solve time.
    """
    if not reports:
        raise ValueError("emit_profile needs at least one report")
    out = {}
    for rep in reports:
        ok = [r for r in rep.rows if r.error is None]
        errs = [r.abs_error for r in ok]
        per_solve = {r.N: r.cpu_seconds for r in ok}
        out[f"{rep.case}/{rep.method}"] = {
            "slopes": {repr(p): s for p, s in rep.slopes.items()},
            "best_error": min(errs) if errs else None,
            "total_cpu_seconds": float(sum(per_solve.values())),
        }
    return json.dumps(out, sort_keys=True, indent=2)
