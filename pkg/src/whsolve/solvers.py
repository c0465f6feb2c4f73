"""Solvers for ``lam*f - int k(x-y) f(y) dy = g``.

* :func:`solve_cwhe` treats a semi-infinite interval in one pass.
* :func:`solve_fredholm_wh` iterates two coupled Wiener-Hopf problems, one
  per endpoint, on the out-of-interval parts ``f_-`` (left of ``a``) and
  ``f_+`` (right of ``b``).
* :func:`solve_fredholm_voronin` iterates on Voronin's auxiliary functions.
* :func:`solve_fredholm_quadrature` is a dense Nyström baseline.

The Fourier solvers share a grid from :func:`whsolve.grid.grid_for_interval`;
the forcing is sampled on ``[a, b]`` and, unless a closed-form transform is
requested, the kernel is sampled on ``[-(b-a), b-a]`` and transformed on the
same grid.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from whsolve.cases import IntervalKind, truncated_samples
from whsolve.decomp import FilterKind, FilterSpec, _split, complex_log, filter_values
from whsolve.errors import (
    InvalidProblemError,
    SingularDenominatorError,
    SingularSystemError,
)
from whsolve.grid import DEFAULT_M_TRUNC, Grid
from whsolve.spectral import _END_WEIGHTS, HilbertMethod, _fwd, _inv

logger = logging.getLogger(__name__)

#: Magnitude below which a divisor is treated as zero.
DENOMINATOR_TOL = 1e-13


@dataclass(frozen=True)
class SolverConfig:
    """Settings shared by the Fourier solvers.

    Attributes
    ----------
    hilbert : HilbertMethod
        Hilbert transform used in every decomposition.
    filter : FilterSpec or None
        Filter applied once to the final solution transform. None selects
        the method default: the order-8 exponential filter for the sinc
        transform and no filter for the sign-based transform.
    max_iter : int
        Cap on fixed-point iterations.
    fp_tol : float
        Convergence threshold on the sup-norm change of the solution
        transform between iterations.
    m_trunc : int
        Truncation multiplier used when a solver builds its own grid.
    use_closed_form_kernel_hat : bool
        Use ``problem.kernel_hat`` instead of transforming the sampled
        kernel. The closed form describes the untruncated kernel.
    endpoint_weight : float
        Weight of the forcing and kernel samples at the limits of their
        supports; 1 keeps the full closed-interval value.
    start : {"plus", "minus"}
        Which out-of-interval unknown starts at zero.
    """

    hilbert: HilbertMethod = HilbertMethod.SIGN
    filter: Optional[FilterSpec] = None
    max_iter: int = 5
    fp_tol: float = 1e-10
    m_trunc: int = DEFAULT_M_TRUNC
    use_closed_form_kernel_hat: bool = False
    endpoint_weight: float = 1.0
    start: str = "plus"

    def __post_init__(self):
        object.__setattr__(self, "hilbert", HilbertMethod(self.hilbert))
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not self.fp_tol > 0:
            raise ValueError(f"fp_tol must be positive, got {self.fp_tol!r}")
        if int(self.m_trunc) != self.m_trunc or self.m_trunc < 1:
            raise ValueError(f"m_trunc must be a positive integer, got {self.m_trunc!r}")
        if not 0.0 <= self.endpoint_weight <= 1.0:
            raise ValueError(f"endpoint_weight must lie in [0, 1], got {self.endpoint_weight!r}")
        if self.start not in ("plus", "minus"):
            raise ValueError(f"start must be 'plus' or 'minus', got {self.start!r}")

    def resolved_filter(self):
        """The filter actually applied, after method defaults."""
        if self.filter is not None:
            return self.filter
        if self.hilbert is HilbertMethod.SINC:
            return FilterSpec.exponential()
        return FilterSpec.none()


@dataclass(eq=False)
class Solution:
    """Numerical solution.

    Attributes
    ----------
    x : ndarray
        Nodes in the closed solution interval.
    f_values : ndarray
        Real part of the solution at ``x``.
    iterations_used : int
    converged : bool
    grid : Grid or None
        Fourier grid; None for the quadrature solver.
    imag_leakage : float
        ``max|Im f| / max|Re f|`` over the grid before taking the real part.
    changes : list of float
        Sup-norm change of the solution transform after each iteration
        from the second on.
    aux : dict
        Final iterates of the auxiliary unknowns and full-grid samples
        (``x_full``, ``f_full``, ``F0``).
    """

    x: np.ndarray
    f_values: np.ndarray
    iterations_used: int = 1
    converged: bool = True
    grid: Optional[Grid] = None
    imag_leakage: float = 0.0
    changes: list = field(default_factory=list)
    aux: dict = field(default_factory=dict)

    def value_near(self, x):
        """Solution at the node nearest to ``x`` and that node."""
        i = int(np.argmin(np.abs(self.x - x)))
        return self.f_values[i], self.x[i]


def _divide(num, den, what):
    mag = np.abs(den)
    if not np.all(mag >= DENOMINATOR_TOL):
        i = int(np.argmin(mag))
        raise SingularDenominatorError(f"{what} has magnitude {mag[i]:.3e} at index {i}")
    return num / den


def _check_divisor(den, what):
    _divide(1.0, den, what)


def _forcing_hat(problem, grid, config):
    lo = problem.a if np.isfinite(problem.a) else -np.inf
    hi = problem.b if np.isfinite(problem.b) else np.inf
    g0 = truncated_samples(problem.forcing, grid.x, lo, hi, config.endpoint_weight)
    return _fwd(g0, grid)


def _kernel_hat(problem, grid, config, half_width):
    if config.use_closed_form_kernel_hat and problem.kernel_hat is not None:
        return np.asarray(problem.kernel_hat(grid.xi), dtype=complex)
    k0 = truncated_samples(
        problem.kernel, grid.offsets, -half_width, half_width, config.endpoint_weight
    )
    return _fwd(k0, Grid(grid.N, grid.x_max, 0.0))


def _factor(lhat, grid, method):
    lg = complex_log(lhat)
    p, m = _split(lg, grid, 0.0, method)
    return np.exp(p), np.exp(m)


def _finish(F0, problem, grid, config, iterations, converged, changes, aux):
    spec = config.resolved_filter()
    if spec.kind is not FilterKind.NONE:
        F0 = F0 * filter_values(grid, spec)
    f = _inv(F0, grid)
    re = f.real
    peak = np.max(np.abs(re))
    leak = float(np.max(np.abs(f.imag)) / peak) if peak > 0 else float(np.max(np.abs(f.imag)))
    if leak > 1e-10:
        logger.warning("imaginary leakage %.2e in %s solution", leak, problem.name)
    x = grid.x
    tol = 1e-9 * grid.dx
    lo = problem.a if np.isfinite(problem.a) else -np.inf
    hi = problem.b if np.isfinite(problem.b) else np.inf
    inside = (x >= lo - tol) & (x <= hi + tol)
    aux = dict(aux, x_full=x, f_full=re, F0=F0)
    return Solution(
        x=x[inside], f_values=re[inside], iterations_used=iterations,
        converged=converged, grid=grid, imag_leakage=leak, changes=changes, aux=aux,
    )


def _require_finite(problem):
    if problem.kind is not IntervalKind.FINITE:
        raise InvalidProblemError("this solver needs a finite interval")


def _check_grid(problem, grid):
    for end in (problem.a, problem.b):
        if np.isfinite(end) and grid.node_index(end) is None:
            raise InvalidProblemError(f"interval limit {end} is not a node of the grid")


def solve_cwhe(problem, grid, config=SolverConfig()):
    """Wiener-Hopf equation on a half-line, single pass.

    For ``[a, inf)``: factorise ``lam - k_hat = l_plus * l_minus``, split
    ``c = g_hat / l_minus`` at ``a`` and return ``f_hat = c_plus / l_plus``.
    The case ``(-inf, b]`` is the mirror image.

    The half-line is represented by ``grid``, which must extend well past
    the decay length of ``g``, ``k`` and ``f``. The kernel is sampled over
    the whole grid.

    Parameters
    ----------
    problem : Problem
        Semi-infinite problem.
    grid : Grid
    config : SolverConfig

    Returns
    -------
    Solution
    """
    if problem.kind is IntervalKind.FINITE:
        raise InvalidProblemError("solve_cwhe needs a semi-infinite problem")
    _check_grid(problem, grid)
    method = config.hilbert
    G = _forcing_hat(problem, grid, config)
    K = _kernel_hat(problem, grid, config, np.inf)
    Lp, Lm = _factor(problem.lam - K, grid, method)
    if problem.kind is IntervalKind.SEMI_INFINITE_RIGHT:
        cp, _ = _split(G / Lm, grid, problem.a, method)
        F0 = cp / Lp
    else:
        _, cm = _split(G / Lp, grid, problem.b, method)
        F0 = cm / Lm
    return _finish(F0, problem, grid, config, 1, True, [], {})


def _iterate(step, config, label):
    """Run ``step`` until the solution transform settles."""
    old = None
    changes = []
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        F0 = step()
        if old is not None:
            changes.append(float(np.max(np.abs(F0 - old))))
            logger.debug("%s iteration %d: change %.3e", label, it, changes[-1])
            if changes[-1] < config.fp_tol:
                converged = True
                break
        old = F0
    if not converged:
        logger.info("%s stopped after %d iterations, last change %s", label, it,
                    f"{changes[-1]:.3e}" if changes else "n/a")
    return F0, it, converged, changes


def solve_fredholm_wh(problem, grid, config=SolverConfig()):
    """Fixed-point Wiener-Hopf solver on a finite interval.

    With ``l = lam - k0_hat = l_plus * l_minus`` and ``f_+ = 0`` initially,
    each iteration performs::

        c1 = (g0_hat - f_+) / l_minus, split at a:  f_- = l_minus * c1_minus
        c2 = (g0_hat - f_-) / l_plus,  split at b:  f0  = c2_minus / l_minus
                                                     f_+ = l_plus * c2_plus

    ``config.start = "minus"`` starts from ``f_- = 0`` and swaps the order
    of the two half-steps. The filter is applied to the final ``f0`` only.

    Parameters
    ----------
    problem : Problem
        Finite problem.
    grid : Grid
        Grid whose nodes include ``a`` and ``b``.
    config : SolverConfig

    Returns
    -------
    Solution
        ``converged`` is False when ``max_iter`` is reached first.
    """
    _require_finite(problem)
    _check_grid(problem, grid)
    a, b = problem.a, problem.b
    method = config.hilbert
    G = _forcing_hat(problem, grid, config)
    K = _kernel_hat(problem, grid, config, b - a)
    Lp, Lm = _factor(problem.lam - K, grid, method)
    _check_divisor(Lp, "l_plus")
    _check_divisor(Lm, "l_minus")
    state = {"fp": np.zeros(grid.N, complex), "fm": np.zeros(grid.N, complex)}

    def left():
        c1p, c1m = _split((G - state["fp"]) / Lm, grid, a, method)
        state["fm"] = Lm * c1m
        return c1p / Lp

    def right():
        c2p, c2m = _split((G - state["fm"]) / Lp, grid, b, method)
        state["fp"] = Lp * c2p
        return c2m / Lm

    if config.start == "plus":
        def step():
            left()
            return right()
    else:
        def step():
            right()
            return left()

    F0, it, conv, changes = _iterate(step, config, "wh")
    return _finish(F0, problem, grid, config, it, conv, changes,
                   {"f_plus": state["fp"], "f_minus": state["fm"]})


def solve_fredholm_voronin(problem, grid, config=SolverConfig()):
    """Voronin-variant fixed-point solver on a finite interval.

    The kernel transform is split at 0 into ``k_plus + k_minus`` and shifted
    to ``kp = k_plus + mu``, ``km = k_minus + mu`` with ``mu = (1-lam)/2``,
    so ``lam - k_hat = (1 - km) - kp``. Starting from ``phi2_minus = 0``::

        c1 = km/(1-km) (g0_hat + phi2_minus), split at a:  phi1_plus  = c1_plus
        c2 = kp/(1-kp) (g0_hat + phi1_plus),  split at b:  phi2_minus = c2_minus
        f0 = (c2_minus + (1-kp) c2_plus) / kp

    Parameters
    ----------
    problem : Problem
        Finite problem.
    grid : Grid
    config : SolverConfig

    Returns
    -------
    Solution

    Raises
    ------
    SingularDenominatorError
        If ``kp``, ``km``, ``1-kp`` or ``1-km`` vanishes at a node, e.g. for
        a zero kernel with ``lam = 1``.
    """
    _require_finite(problem)
    _check_grid(problem, grid)
    a, b = problem.a, problem.b
    method = config.hilbert
    G = _forcing_hat(problem, grid, config)
    K = _kernel_hat(problem, grid, config, b - a)
    k_plus, k_minus = _split(K, grid, 0.0, method)
    mu = 0.5 * (1.0 - problem.lam)
    kp, km = k_plus + mu, k_minus + mu
    mult_m = _divide(km, 1.0 - km, "1 - k_minus")
    mult_p = _divide(kp, 1.0 - kp, "1 - k_plus")
    _check_divisor(kp, "k_plus + (1-lam)/2")
    _check_divisor(km, "k_minus + (1-lam)/2")
    state = {"phi1p": np.zeros(grid.N, complex), "phi2m": np.zeros(grid.N, complex)}

    def step():
        c1p, _ = _split(mult_m * (G + state["phi2m"]), grid, a, method)
        state["phi1p"] = c1p
        c2p, c2m = _split(mult_p * (G + state["phi1p"]), grid, b, method)
        state["phi2m"] = c2m
        return (c2m + (1.0 - kp) * c2p) / kp

    F0, it, conv, changes = _iterate(step, config, "voronin")
    return _finish(F0, problem, grid, config, it, conv, changes,
                   {"phi1_plus": state["phi1p"], "phi2_minus": state["phi2m"]})


def nystrom_weights(M, order):
    """End-corrected composite weights for ``M`` equispaced nodes (unit step)."""
    if order not in _END_WEIGHTS:
        raise ValueError(f"order must be one of {sorted(_END_WEIGHTS)}, got {order!r}")
    if M < 2 * order:
        raise ValueError(f"need M >= {2 * order} nodes for order {order}, got {M}")
    w = np.ones(M)
    for k, e in enumerate(_END_WEIGHTS[order]):
        w[k] = e
        w[-1 - k] = e
    return w


def solve_fredholm_quadrature(problem, M, order=4):
    """Dense Nyström solve on ``M`` equispaced nodes spanning ``[a, b]``.

    Solves ``(lam I - K W) f = g`` with ``K_ij = k(x_i - x_j)`` and
    end-corrected weights ``W`` of the given order.

    Parameters
    ----------
    problem : Problem
        Finite problem.
    M : int
        Number of nodes, at least ``2*order``.
    order : {2, 3, 4}

    Returns
    -------
    Solution
    """
    _require_finite(problem)
    x = np.linspace(problem.a, problem.b, M)
    h = (problem.b - problem.a) / (M - 1)
    w = nystrom_weights(M, order) * h
    A = -problem.kernel(x[:, None] - x[None, :]) * w[None, :]
    A[np.diag_indices(M)] += problem.lam
    g = np.asarray(problem.forcing(x), dtype=float)
    try:
        lu = linalg.lu_factor(A, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(str(exc)) from exc
    if np.min(np.abs(np.diag(lu[0]))) < DENOMINATOR_TOL * np.max(np.abs(A)):
        raise SingularSystemError("Nyström matrix is numerically singular")
    f = linalg.lu_solve(lu, g)
    return Solution(x=x, f_values=f, iterations_used=1, converged=True)
