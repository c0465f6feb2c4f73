"""Additive (Plemelj-Sokhotsky) decomposition, logarithmic factorisation
and spectral filters.

With ``P = i*H`` from :mod:`whsolve.spectral`, the split of ``fhat`` at a
state-space point ``a`` is::

    plus  = (fhat + e^{i a xi} P[e^{-i a xi} fhat]) / 2
    minus = (fhat - e^{i a xi} P[e^{-i a xi} fhat]) / 2

``plus`` is the transform of the part of ``f`` on ``x > a`` and ``minus``
the part on ``x < a``. With the sign-based transform the sample at ``x = a``
is split evenly between the two.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np

from whsolve.errors import (
    InvalidFilterError,
    OffGridShiftError,
    SingularSymbolError,
    WindingNumberError,
)
from whsolve.spectral import HilbertMethod, Side, SampledFunction, _require, hilbert

logger = logging.getLogger(__name__)

#: Strength that drives the exponential filter to machine epsilon at the
#: Nyquist node.
DEFAULT_THETA = -np.log(np.finfo(float).eps)

#: Symbol magnitude treated as zero by :func:`factorize`.
SINGULAR_TOL = 1e-13


class FilterKind(enum.Enum):
    NONE = "none"
    EXPONENTIAL = "exponential"
    PLANCK = "planck"


@dataclass(frozen=True)
class FilterSpec:
    """Spectral filter parameters.

    Attributes
    ----------
    kind : FilterKind
    p : int
        Even order of the exponential filter.
    theta : float
        Strength of the exponential filter, ``sigma = exp(-theta*eta**p)``.
    eps_taper : float
        Fraction of ``[-1, 1]`` used by each slope of the Planck taper.
    """

    kind: FilterKind = FilterKind.EXPONENTIAL
    p: int = 8
    theta: float = DEFAULT_THETA
    eps_taper: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "kind", FilterKind(self.kind))
        if self.kind is FilterKind.EXPONENTIAL:
            if int(self.p) != self.p or self.p < 2 or self.p % 2:
                raise InvalidFilterError(f"p must be an even integer >= 2, got {self.p!r}")
            if not self.theta > 0:
                raise InvalidFilterError(f"theta must be positive, got {self.theta!r}")
        elif self.kind is FilterKind.PLANCK:
            if not 0.0 < self.eps_taper < 0.5:
                raise InvalidFilterError(
                    f"eps_taper must lie in (0, 1/2), got {self.eps_taper!r}"
                )

    @classmethod
    def none(cls):
        return cls(FilterKind.NONE)

    @classmethod
    def exponential(cls, p=8, theta=DEFAULT_THETA):
        return cls(FilterKind.EXPONENTIAL, p=p, theta=theta)

    @classmethod
    def planck(cls, eps_taper=0.1):
        return cls(FilterKind.PLANCK, eps_taper=eps_taper)


@dataclass(frozen=True, eq=False)
class DecompositionPair:
    """Result of :func:`decompose`; ``plus + minus`` is the input."""

    plus: SampledFunction
    minus: SampledFunction
    shift: float


def _planck(eta, eps):
    e1, e2, e3, e4 = -1.0, eps - 1.0, 1.0 - eps, 1.0
    s = np.zeros_like(eta)
    s[(eta >= e2) & (eta <= e3)] = 1.0
    with np.errstate(over="ignore", divide="ignore"):
        left = (eta > e1) & (eta < e2)
        el = eta[left]
        z = (e2 - e1) / (el - e1) + (e2 - e1) / (el - e2)
        s[left] = 1.0 / (np.exp(z) + 1.0)
        right = (eta > e3) & (eta < e4)
        er = eta[right]
        z = (e3 - e4) / (er - e3) + (e3 - e4) / (er - e4)
        s[right] = 1.0 / (np.exp(z) + 1.0)
    return s


def filter_values(grid, spec):
    """Filter ``sigma(eta_m)`` at ``eta_m = xi_m / xi_max``.

    Parameters
    ----------
    grid : Grid
    spec : FilterSpec

    Returns
    -------
    ndarray of float, shape (N,)
    """
    eta = grid.xi / grid.xi_max
    if spec.kind is FilterKind.NONE:
        return np.ones(grid.N)
    if spec.kind is FilterKind.EXPONENTIAL:
        return np.exp(-spec.theta * eta ** spec.p)
    return _planck(eta, spec.eps_taper)


def apply_filter(fhat, spec):
    """Multiply Fourier samples pointwise by :func:`filter_values`."""
    _require(fhat, Side.FOURIER)
    if spec.kind is FilterKind.NONE:
        return fhat
    return fhat.with_values(fhat.values * filter_values(fhat.grid, spec))


def _check_shift(grid, shift, tol=1e-9):
    k = (shift - grid.center) / grid.dx
    if not np.isfinite(k) or abs(k - np.rint(k)) > tol:
        raise OffGridShiftError(
            f"shift {shift!r} is not a state node of the grid "
            f"(center {grid.center}, dx {grid.dx})"
        )


def _split(values, grid, shift, method):
    """Array-level decomposition; returns (plus, minus)."""
    if shift == 0.0:
        h = hilbert(SampledFunction(grid, Side.FOURIER, values), method).values
    else:
        ph = np.exp(1j * shift * grid.xi)
        h = ph * hilbert(SampledFunction(grid, Side.FOURIER, values / ph), method).values
    return 0.5 * (values + h), 0.5 * (values - h)


def decompose(fhat, shift=0.0, method=HilbertMethod.SIGN):
    """Split ``fhat`` into the transforms of its parts right and left of ``shift``.

    Parameters
    ----------
    fhat : SampledFunction
        Fourier-side samples.
    shift : float
        Split point in state space; must be a state node of ``fhat.grid``
        up to ``1e-9*dx``.
    method : HilbertMethod

    Returns
    -------
    DecompositionPair
    """
    _require(fhat, Side.FOURIER)
    _check_shift(fhat.grid, shift)
    plus, minus = _split(fhat.values, fhat.grid, shift, method)
    return DecompositionPair(fhat.with_values(plus), fhat.with_values(minus), float(shift))


def complex_log(lhat):
    """Continuous complex logarithm of ``lhat`` along the grid.

    The phase is unwrapped sequentially from index 0. Raises when a sample
    vanishes, when consecutive phases differ by pi or more, or when the
    phase winds.
    """
    v = np.asarray(lhat)
    mag = np.abs(v)
    if not np.all(mag >= SINGULAR_TOL):
        i = int(np.argmin(mag))
        raise SingularSymbolError(f"symbol magnitude {mag[i]:.3e} at index {i}")
    steps = np.angle(v[1:] / v[:-1])
    if np.any(np.abs(steps) >= np.pi * (1 - 1e-12)):
        i = int(np.argmax(np.abs(steps)))
        raise WindingNumberError(
            f"phase jumps by pi between indices {i} and {i + 1}; the symbol "
            "changes sign or crosses zero between nodes"
        )
    phase = np.angle(v[0]) + np.concatenate(([0.0], np.cumsum(steps)))
    closing = np.angle(v[0] / v[-1])
    winding = np.rint((phase[-1] - phase[0] + closing) / (2 * np.pi))
    if winding != 0:
        raise WindingNumberError(f"symbol has winding number {int(winding)}")
    return np.log(mag) + 1j * phase


def factorize(lhat, method=HilbertMethod.SIGN):
    """Wiener-Hopf factorisation ``lhat = plus * minus`` by logarithmic decomposition.

    Parameters
    ----------
    lhat : SampledFunction
        Fourier-side symbol, nonzero with zero winding number.
    method : HilbertMethod

    Returns
    -------
    plus, minus : SampledFunction
        ``plus`` is the transform of a sequence supported on ``x >= 0``
        (up to the split-node convention), ``minus`` on ``x <= 0``.
    """
    _require(lhat, Side.FOURIER)
    lg = complex_log(lhat.values)
    p, m = _split(lg, lhat.grid, 0.0, method)
    logger.debug("factorised symbol on N=%d", lhat.grid.N)
    return lhat.with_values(np.exp(p)), lhat.with_values(np.exp(m))
