"""FFT-based Wiener-Hopf and Fredholm solvers for convolution integral
equations of the second kind, with a convergence benchmark harness."""

import logging

from whsolve.errors import (
    WhsolveError,
    InvalidGridError,
    SideError,
    OffGridShiftError,
    SingularSymbolError,
    WindingNumberError,
    SingularDenominatorError,
    SingularSystemError,
    InvalidFilterError,
    InvalidProblemError,
)
from whsolve.grid import Grid, make_grid, grid_for_interval, DEFAULT_M_TRUNC
from whsolve.spectral import (
    Side,
    SampledFunction,
    HilbertMethod,
    forward_ft,
    inverse_ft,
    sign_multiplier,
    hilbert_sign,
    hilbert_sinc,
    hilbert_quadrature,
    hilbert,
)
from whsolve.decomp import (
    FilterKind,
    FilterSpec,
    DecompositionPair,
    filter_values,
    apply_filter,
    decompose,
    factorize,
)
from whsolve.cases import (
    IntervalKind,
    Problem,
    gaussian_case,
    cauchy_case,
    laplace_case,
    get_case,
    verify_case,
)
from whsolve.solvers import (
    SolverConfig,
    Solution,
    solve_cwhe,
    solve_fredholm_wh,
    solve_fredholm_voronin,
    solve_fredholm_quadrature,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"
