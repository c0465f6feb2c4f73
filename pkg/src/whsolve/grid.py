"""Paired uniform grids in state space and Fourier space.

State nodes are ``x_n = center + n*dx`` and Fourier nodes ``xi_m = m*dxi``
for ``n, m = -N/2 ... N/2-1``, with ``dx = 2*x_max/N`` and ``dxi = pi/x_max``
so that ``dx*dxi = 2*pi/N``.
"""

from dataclasses import dataclass

import numpy as np

from whsolve.errors import InvalidGridError

#: Default state-space truncation multiplier: the grid spans
#: ``m_trunc*(b-a)`` on either side of the interval midpoint.
DEFAULT_M_TRUNC = 4


@dataclass(frozen=True)
class Grid:
    """Immutable description of a state/Fourier grid pair.

    Only the defining parameters are stored; steps and node arrays are
    derived on demand.

    Attributes
    ----------
    N : int
        Number of nodes (even, at least 8).
    x_max : float
        Half-width of the state-space window.
    center : float
        State-space grid center.
    """

    N: int
    x_max: float
    center: float = 0.0

    @property
    def dx(self):
        return 2.0 * self.x_max / self.N

    @property
    def dxi(self):
        return np.pi / self.x_max

    @property
    def xi_max(self):
        return np.pi / self.dx

    @property
    def index(self):
        """Integer node indices ``-N/2 ... N/2-1``."""
        return np.arange(-(self.N // 2), self.N // 2)

    @property
    def x(self):
        """State-space nodes."""
        return self.center + self.index * self.dx

    @property
    def xi(self):
        """Fourier-space nodes."""
        return self.index * self.dxi

    @property
    def offsets(self):
        """State nodes of the same grid re-centered at zero.

        Used to sample convolution kernels, whose argument is a difference
        of two state nodes.
        """
        return self.index * self.dx

    def node_index(self, x, tol=1e-9):
        """Return the position in storage of the node at ``x``.

        Parameters
        ----------
        x : float
            Location expected to be a node.
        tol : float
            Allowed distance from the node, in units of ``dx``.

        Returns
        -------
        int or None
            Storage index, or None when ``x`` is not a node within ``tol``.
        """
        k = (x - self.center) / self.dx
        kr = np.rint(k)
        if abs(k - kr) > tol or not -(self.N // 2) <= kr < self.N // 2:
            return None
        return int(kr) + self.N // 2

    def nearest_index(self, x):
        """Storage index of the node nearest to ``x``."""
        k = int(np.rint((x - self.center) / self.dx))
        return int(np.clip(k, -(self.N // 2), self.N // 2 - 1)) + self.N // 2


def make_grid(N, x_max, center=0.0):
    """Build a grid pair.

    Parameters
    ----------
    N : int
        Even number of nodes, at least 8.
    x_max : float
        Positive state-space half-width.
    center : float, optional
        State-space center.

    Returns
    -------
    Grid

    Raises
    ------
    InvalidGridError
        If ``N`` is odd or below 8, or ``x_max`` is not positive.
    """
    if int(N) != N or N < 8 or N % 2:
        raise InvalidGridError(f"N must be an even integer >= 8, got {N!r}")
    if not np.isfinite(x_max) or x_max <= 0:
        raise InvalidGridError(f"x_max must be positive, got {x_max!r}")
    if not np.isfinite(center):
        raise InvalidGridError(f"center must be finite, got {center!r}")
    return Grid(int(N), float(x_max), float(center))


def grid_for_interval(a, b, N, m_trunc=DEFAULT_M_TRUNC):
    """Grid centered on ``[a, b]`` whose nodes include both endpoints.

    The window is ``x_max = m_trunc*(b-a)``, so the endpoints sit
    ``N/(4*m_trunc)`` nodes either side of the center.

    Parameters
    ----------
    a, b : float
        Interval limits, ``a < b``.
    N : int
        Number of nodes; a multiple of ``4*m_trunc`` so that ``a`` and
        ``b``, which sit ``N/(4*m_trunc)`` nodes from the center, are nodes.
    m_trunc : int, optional
        Truncation multiplier.

    Returns
    -------
    Grid
    """
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise InvalidGridError(f"need finite a < b, got a={a!r}, b={b!r}")
    if int(m_trunc) != m_trunc or m_trunc < 1:
        raise InvalidGridError(f"m_trunc must be a positive integer, got {m_trunc!r}")
    if int(N) != N or N % (4 * m_trunc):
        raise InvalidGridError(
            f"N={N} is not a multiple of 4*m_trunc={4 * m_trunc}"
        )
    return make_grid(N, m_trunc * (b - a), 0.5 * (a + b))
