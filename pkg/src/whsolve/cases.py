"""Analytic test problems ``lam*f(x) - int_a^b k(x-y) f(y) dy = g(x)``.

Each built-in case has ``f = k`` and ``lam = 1`` with ``g`` in closed form:

* Gaussian, ``f(x) = exp(-x^2)/sqrt(pi)``,
* Cauchy, ``f(x) = 1/(pi (1+x^2))``,
* Laplace, ``f(x) = exp(-|x|)/2`` with ``0 < a < b``.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from whsolve.errors import InvalidProblemError

logger = logging.getLogger(__name__)

#: Default interval per built-in case.
DEFAULT_INTERVALS = {
    "gaussian": (0.0, 0.25),
    "cauchy": (-0.25, 0.25),
    "laplace": (1.0, 1.5),
}

#: Below this ``|x|`` the Cauchy forcing uses its Taylor expansion.
CAUCHY_TAYLOR_RADIUS = 1e-4


class IntervalKind(enum.Enum):
    FINITE = "finite"
    SEMI_INFINITE_RIGHT = "semi-infinite-right"
    SEMI_INFINITE_LEFT = "semi-infinite-left"


@dataclass(frozen=True)
class Problem:
    """Data of a second-kind convolution equation.

    Attributes
    ----------
    lam : float
        Coefficient of ``f``; nonzero.
    a, b : float
        Limits; ``b = inf`` for SEMI_INFINITE_RIGHT, ``a = -inf`` for
        SEMI_INFINITE_LEFT.
    kind : IntervalKind
    kernel : callable
        ``k(x)``, vectorised.
    forcing : callable
        ``g(x)``, vectorised; zero outside the interval.
    kernel_hat : callable, optional
        Closed-form transform of the full kernel.
    analytic_solution : callable, optional
    name : str
    """

    lam: float
    a: float
    b: float
    kind: IntervalKind
    kernel: Callable
    forcing: Callable
    kernel_hat: Optional[Callable] = None
    analytic_solution: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "kind", IntervalKind(self.kind))
        if self.lam == 0:
            raise InvalidProblemError("lam must be nonzero for a second-kind equation")
        if self.kind is IntervalKind.FINITE:
            if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
                raise InvalidProblemError(f"finite problem needs a < b, got ({self.a}, {self.b})")
        elif self.kind is IntervalKind.SEMI_INFINITE_RIGHT:
            if not np.isfinite(self.a) or self.b != np.inf:
                raise InvalidProblemError("semi-infinite-right problem needs finite a and b = inf")
        elif not np.isfinite(self.b) or self.a != -np.inf:
            raise InvalidProblemError("semi-infinite-left problem needs a = -inf and finite b")

    @property
    def length(self):
        return self.b - self.a


def _indicator(x, a, b):
    return (x >= a) & (x <= b)


def _on_interval(values, x, a, b):
    return np.where(_indicator(x, a, b), values, 0.0)


def truncated_samples(func, x, lo, hi, endpoint_weight=1.0, tol=None):
    """Sample ``func`` on ``[lo, hi]`` and zero it elsewhere.

    Nodes within ``tol`` of ``lo`` or ``hi`` are scaled by
    ``endpoint_weight``. Infinite limits impose no cut on that side.

    Parameters
    ----------
    func : callable
    x : ndarray
        Sample locations (uniform).
    lo, hi : float
    endpoint_weight : float
        1 keeps the full value at the limits, 0.5 gives the symmetric
        half weight.
    tol : float, optional
        Node tolerance; defaults to ``1e-9`` times the step of ``x``.
    """
    x = np.asarray(x, dtype=float)
    if tol is None:
        tol = 1e-9 * abs(x[1] - x[0])
    w = ((x >= lo - tol) & (x <= hi + tol)).astype(float)
    if np.isfinite(lo):
        w[np.abs(x - lo) <= tol] *= endpoint_weight
    if np.isfinite(hi):
        w[np.abs(x - hi) <= tol] *= endpoint_weight
    inside = w != 0
    out = np.zeros_like(x)
    xs = x[inside]
    # Snap near-node samples onto the limit so closed forms see exact values.
    if np.isfinite(lo):
        xs = np.where(np.abs(xs - lo) <= tol, lo, xs)
    if np.isfinite(hi):
        xs = np.where(np.abs(xs - hi) <= tol, hi, xs)
    out[inside] = np.asarray(func(xs), dtype=float) * w[inside]
    return out


def _check_order(a, b):
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise InvalidProblemError(f"need finite a < b, got a={a!r}, b={b!r}")


def gaussian_case(a, b):
    """Gaussian kernel and solution on ``[a, b]``."""
    _check_order(a, b)

    def f(x):
        return np.exp(-np.square(x)) / np.sqrt(np.pi)

    def g(x):
        x = np.asarray(x, dtype=float)
        val = f(x) - np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi) * (
            ndtr(2 * b - x) - ndtr(2 * a - x)
        )
        return _on_interval(val, x, a, b)

    return Problem(
        1.0, float(a), float(b), IntervalKind.FINITE, f, g,
        kernel_hat=lambda xi: np.exp(-np.square(xi) / 4.0),
        analytic_solution=f, name="gaussian",
    )


def _cauchy_taylor_coeffs(a, b):
    """Coefficients ``B1..B4`` of the bracket ``B(x) = sum B_n x^n`` at 0."""
    za, zb = a + 1j, b + 1j
    wa, wb = 1 + 1j * a, 1 + 1j * b
    fact = [1, 1, 2, 6]

    def dP(n):
        return 2 * np.real(-fact[n - 1] / za ** n + fact[n - 1] / zb ** n)

    def dA(n):
        c = (-1) ** (n - 1) * fact[n - 1] * (-1j) ** n
        return np.imag(c * (wb ** -n - wa ** -n))

    C = np.arctan(b) - np.arctan(a)
    return (
        dP(1) + 2 * C,
        dP(2) / 2 + dA(1),
        dP(3) / 6 + dA(2) / 2,
        dP(4) / 24 + dA(3) / 6,
    )


def cauchy_case(a, b):
    """Cauchy kernel and solution on ``[a, b]``.

    The closed form divides by ``x``; for ``|x| < 1e-4`` the bracket is
    replaced by its cubic Taylor polynomial divided by ``x``.
    """
    _check_order(a, b)
    B1, B2, B3, B4 = _cauchy_taylor_coeffs(a, b)
    C = np.arctan(b) - np.arctan(a)

    def f(x):
        return 1.0 / (np.pi * (np.square(x) + 1.0))

    def integral(x):
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < CAUCHY_TAYLOR_RADIUS
        xs = np.where(small, 1.0, x)
        bracket = np.log(
            (b * b + 1) * ((a - xs) ** 2 + 1) / ((a * a + 1) * ((b - xs) ** 2 + 1))
        ) + xs * (C + np.arctan(b - xs) - np.arctan(a - xs))
        direct = bracket / xs
        series = B1 + x * (B2 + x * (B3 + x * B4))
        return np.where(small, series, direct) / (np.pi ** 2 * (x * x + 4))

    def g(x):
        x = np.asarray(x, dtype=float)
        return _on_interval(f(x) - integral(x), x, a, b)

    return Problem(
        1.0, float(a), float(b), IntervalKind.FINITE, f, g,
        kernel_hat=lambda xi: np.exp(-np.abs(xi)),
        analytic_solution=f, name="cauchy",
    )


def laplace_case(a, b):
    """Laplace kernel and solution on ``[a, b]`` with ``0 < a < b``."""
    _check_order(a, b)
    if a <= 0:
        raise InvalidProblemError(f"laplace case needs 0 < a, got a={a!r}")

    def f(x):
        return 0.5 * np.exp(-np.abs(x))

    def g(x):
        x = np.asarray(x, dtype=float)
        val = np.exp(-x) * (0.375 + 0.125 * np.exp(-2 * (b - x)) + 0.25 * (a - x))
        return _on_interval(val, x, a, b)

    return Problem(
        1.0, float(a), float(b), IntervalKind.FINITE, f, g,
        kernel_hat=lambda xi: 1.0 / (1.0 + np.square(xi)),
        analytic_solution=f, name="laplace",
    )


CASES = {"gaussian": gaussian_case, "cauchy": cauchy_case, "laplace": laplace_case}


def get_case(name, a=None, b=None):
    """Built-in case by name, on its default interval unless given."""
    try:
        ctor = CASES[name]
    except KeyError:
        raise InvalidProblemError(f"unknown case {name!r}; choose from {sorted(CASES)}") from None
    da, db = DEFAULT_INTERVALS[name]
    return ctor(da if a is None else a, db if b is None else b)


def residual(problem, f, x):
    """``lam f(x) - int_a^b k(x-y) f(y) dy - g(x)`` by adaptive quadrature."""
    a, b = problem.a, problem.b
    k = problem.kernel
    pts = [x] if a < x < b else None
    val, _ = integrate.quad(
        lambda y: k(x - y) * f(y), a, b, points=pts, epsabs=1e-14, epsrel=1e-13, limit=200
    )
    return problem.lam * f(x) - val - float(problem.forcing(np.array([x]))[0])


def verify_case(problem, n_check=9):
    """Max residual of the analytic solution at ``n_check`` interior points.

    Parameters
    ----------
    problem : Problem
        Finite problem carrying ``analytic_solution``.
    n_check : int

    Returns
    -------
    float
    """
    if problem.analytic_solution is None:
        raise InvalidProblemError("problem has no analytic solution to verify")
    if problem.kind is not IntervalKind.FINITE:
        raise InvalidProblemError("verify_case needs a finite problem")
    xs = problem.a + problem.length * np.arange(1, n_check + 1) / (n_check + 1)
    res = [abs(residual(problem, problem.analytic_solution, x)) for x in xs]
    worst = max(res)
    logger.info("verify %s on [%g, %g]: max residual %.3e", problem.name, problem.a, problem.b, worst)
    return worst
