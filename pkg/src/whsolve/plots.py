"""Figures for benchmark reports and single solutions.

Uses the object-oriented Matplotlib API with the Agg canvas, so no display
or global pyplot state is involved.
"""

import logging

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)


def _save(fig, path):
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    logger.info("wrote figure %s", path)
    return path


def plot_convergence(reports, path, x="N"):
    """Probe error against N (``x="N"``) or solve time (``x="cpu"``).

    One panel per case; one line per method and probe.
    """
    cases = sorted({r.case for r in reports})
    fig = Figure(figsize=(4.5 * len(cases), 3.8))
    axes = fig.subplots(1, len(cases), squeeze=False)[0]
    for ax, case in zip(axes, cases):
        for rep in (r for r in reports if r.case == case):
            for p, slope in rep.slopes.items():
                rows = [r for r in rep.rows if r.probe_frac == p and r.error is None and r.abs_error > 0]
                if not rows:
                    continue
                xs = [r.N if x == "N" else r.cpu_seconds for r in rows]
                label = f"{rep.method} {p:g}"
                if slope is not None and x == "N":
                    label += f" ({slope:.2f})"
                ax.loglog(xs, [r.abs_error for r in rows], marker="o", ms=3, label=label)
        ax.set_title(case)
        ax.set_xlabel("N" if x == "N" else "solve time [s]")
        ax.set_ylabel("abs error at probe")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=6)
    return _save(fig, path)


def plot_solution(solution, problem, path):
    """Numerical and analytic solution, and their difference on a log scale."""
    fig = Figure(figsize=(9, 3.6))
    ax1, ax2 = fig.subplots(1, 2)
    ax1.plot(solution.x, solution.f_values, ".", ms=2, label="numerical")
    if problem.analytic_solution is not None:
        exact = problem.analytic_solution(solution.x)
        ax1.plot(solution.x, exact, "-", lw=1, label="analytic")
        err = np.abs(solution.f_values - exact)
        ax2.semilogy(solution.x, np.maximum(err, 1e-17), ".", ms=2)
    ax1.set_xlabel("x")
    ax1.legend()
    ax2.set_xlabel("x")
    ax2.set_ylabel("abs error")
    fig.suptitle(problem.name)
    return _save(fig, path)
