"""Discrete Fourier transforms and fast Hilbert transforms.

The forward transform carries ``exp(+i xi x)``::

    fhat(xi_m) = dx * sum_n f(x_n) exp(+i xi_m x_n)
    f(x_n)     = dxi/(2 pi) * sum_m fhat(xi_m) exp(-i x_n xi_m)

which is the *inverse* routine of numpy's FFT up to scaling. Values are
stored in node order (``-N/2 ... N/2-1``); the shift to and from FFT order
happens here and nowhere else.

Three Hilbert transforms act on Fourier samples and all return ``i*H fhat``
with ``H fhat(xi) = (1/pi) PV int fhat(eta)/(xi - eta) d eta``:

* :func:`hilbert_sign` multiplies by ``sgn(x)`` in the conjugate domain,
* :func:`hilbert_sinc` evaluates the sinc-expansion sum as a Toeplitz
  product through circulant embedding,
* :func:`hilbert_quadrature` is the dense every-second-point rule, kept as
  an oracle.
"""

import enum
import functools
import logging
from dataclasses import dataclass

import numpy as np

from whsolve.errors import SideError
from whsolve.grid import Grid

logger = logging.getLogger(__name__)


class Side(enum.Enum):
    STATE = "state"
    FOURIER = "fourier"


class HilbertMethod(enum.Enum):
    SIGN = "sign"
    SINC = "sinc"
    QUADRATURE = "quadrature"


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples on one side of a :class:`Grid`.

    Attributes
    ----------
    grid : Grid
    side : Side
    values : ndarray of complex, shape (N,)
        Samples ordered by node value.
    """

    grid: Grid
    side: Side
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.N,):
            raise ValueError(
                f"values must have shape ({self.grid.N},), got {v.shape}"
            )
        object.__setattr__(self, "values", v)

    @property
    def nodes(self):
        return self.grid.x if self.side is Side.STATE else self.grid.xi

    def with_values(self, values):
        return SampledFunction(self.grid, self.side, values)


def state(grid, values):
    """Wrap state-space samples."""
    return SampledFunction(grid, Side.STATE, values)


def fourier(grid, values):
    """Wrap Fourier-space samples."""
    return SampledFunction(grid, Side.FOURIER, values)


def _require(f, side):
    if f.side is not side:
        raise SideError(f"expected {side.value}-side samples, got {f.side.value}")


def _fwd(values, grid):
    N = grid.N
    out = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(values))) * (grid.dx * N)
    if grid.center != 0.0:
        out = out * np.exp(1j * grid.xi * grid.center)
    return out


def _inv(values, grid):
    if grid.center != 0.0:
        values = values * np.exp(-1j * grid.xi * grid.center)
    out = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(values)))
    return out * (grid.dxi / (2.0 * np.pi))


def forward_ft(f):
    """Forward transform of state samples.

    Parameters
    ----------
    f : SampledFunction
        State-side samples.

    Returns
    -------
    SampledFunction
        Fourier-side samples ``dx * sum_n f(x_n) exp(+i xi_m x_n)``,
        including the phase from a nonzero grid center.
    """
    _require(f, Side.STATE)
    return fourier(f.grid, _fwd(f.values, f.grid))


def inverse_ft(fhat):
    """Inverse transform of Fourier samples (exact inverse of :func:`forward_ft`)."""
    _require(fhat, Side.FOURIER)
    return state(fhat.grid, _inv(fhat.values, fhat.grid))


@functools.lru_cache(maxsize=64)
def _sign_array(N):
    s = np.sign(np.arange(-(N // 2), N // 2)).astype(float)
    # The most negative node is the alias of +x_max; zero keeps the array odd.
    s[0] = 0.0
    s.flags.writeable = False
    return s


def sign_multiplier(grid):
    """Symmetric sign array on the zero-centered conjugate nodes.

    Zero at the origin and at the most negative node, ``+1`` on positive
    nodes and ``-1`` on the remaining negative nodes, so the array sums to 0.
    """
    return _sign_array(grid.N).copy()


def _centered(grid):
    if grid.center == 0.0:
        return grid
    return Grid(grid.N, grid.x_max, 0.0)


def _ih_sign(values, grid):
    g0 = _centered(grid)
    return _fwd(_sign_array(grid.N) * _inv(values, g0), g0)


def hilbert_sign(fhat):
    """``i*H fhat`` as ``F[sgn(x) f(x)]`` with the symmetric sign array.

    The conjugate grid is re-centered at zero so that the sign switches at
    ``x = 0`` regardless of the input grid's center. Cost ``O(N log N)``.
    """
    _require(fhat, Side.FOURIER)
    return fhat.with_values(_ih_sign(fhat.values, fhat.grid))


def _pad_length(N):
    return 1 << int(np.ceil(np.log2(2 * N - 1)))


@functools.lru_cache(maxsize=64)
def _sinc_kernel_fft(N):
    m = np.arange(N)
    t = np.zeros(N)
    odd = m % 2 == 1
    t[odd] = 2.0 / (np.pi * m[odd])
    M = _pad_length(N)
    c = np.zeros(M)
    c[:N] = t
    # Toeplitz entry (j, n) is t(j - n) and t is odd, so the wrapped tail
    # holds t(-k) = -t(k).
    c[M - N + 1:] = -t[1:][::-1]
    out = np.fft.fft(c)
    out.flags.writeable = False
    return out


def _ih_sinc(values, hermitian=True):
    N = values.shape[0]
    M = _pad_length(N)
    if hermitian:
        values = values.copy()
        values[0] = 0.0
    y = np.fft.ifft(_sinc_kernel_fft(N) * np.fft.fft(values, M))[:N]
    if hermitian:
        y[0] = 0.0
    return 1j * y


def hilbert_sinc(fhat, hermitian=True):
    """``i*H fhat`` from the sinc-expansion formula.

    ``H fhat(xi_j) = sum_n fhat(xi_n) [1 - cos(pi (j-n))] / (pi (j-n))``,
    i.e. ``2/(pi (j-n))`` for odd ``j-n`` and zero otherwise (including the
    diagonal). The Toeplitz product is embedded in a circulant of the next
    power of two at least ``2N-1`` and applied by FFT.

    Parameters
    ----------
    fhat : SampledFunction
        Fourier-side samples.
    hermitian : bool, optional
        Leave out the node ``-N/2``, which has no mirror node, both as a
        source and as an output. The operator then maps transforms of real
        functions to transforms of real functions. False gives the plain
        sum over all nodes.
    """
    _require(fhat, Side.FOURIER)
    return fhat.with_values(_ih_sinc(fhat.values, hermitian))


_END_WEIGHTS = {
    2: (0.5,),
    3: (5.0 / 12.0, 13.0 / 12.0),
    4: (3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0),
}


def _class_weights(N, order):
    """Quadrature weight of each node within its parity class."""
    w = np.ones(N)
    ends = _END_WEIGHTS[order]
    for parity in (0, 1):
        idx = np.arange(parity, N, 2)
        if idx.size < 2 * len(ends):
            raise ValueError(f"N={N} too small for order {order}")
        for k, e in enumerate(ends):
            w[idx[k]] = e
            w[idx[-1 - k]] = e
    return w


def hilbert_quadrature(fhat, order=2):
    """Dense every-second-point principal-value quadrature, ``O(N^2)``.

    For evaluation node ``j`` only nodes ``n`` with ``j - n`` odd enter, so
    the singularity is never sampled. Those nodes form a grid of step
    ``2*dxi`` on which a composite rule is applied.

    Parameters
    ----------
    fhat : SampledFunction
        Fourier-side samples.
    order : {2, 3, 4}
        2 is the trapezoidal rule; 3 and 4 use end-corrected weights.

    Returns
    -------
    SampledFunction
        ``i*H fhat``.
    """
    _require(fhat, Side.FOURIER)
    if order not in _END_WEIGHTS:
        raise ValueError(f"order must be one of {sorted(_END_WEIGHTS)}, got {order!r}")
    N = fhat.grid.N
    j = np.arange(N)
    d = j[:, None] - j[None, :]
    odd = d % 2 != 0
    T = np.zeros((N, N))
    T[odd] = 2.0 / (np.pi * d[odd])
    T *= _class_weights(N, order)[None, :]
    return fhat.with_values(1j * (T @ fhat.values))


def hilbert(fhat, method):
    """Dispatch to the Hilbert transform selected by ``method``."""
    method = HilbertMethod(method)
    if method is HilbertMethod.SIGN:
        return hilbert_sign(fhat)
    if method is HilbertMethod.SINC:
        return hilbert_sinc(fhat)
    return hilbert_quadrature(fhat)
