import numpy as np
from numpy.polynomial.hermite import hermval
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from whsolve import (
    HilbertMethod,
    SideError,
    forward_ft,
    hilbert,
    hilbert_quadrature,
    hilbert_sign,
    hilbert_sinc,
    inverse_ft,
    make_grid,
    sign_multiplier,
)
from whsolve.spectral import fourier, state


def dft_oracle(values, grid):
    """Direct O(N^2) sum of the forward transform."""
    return grid.dx * np.exp(1j * np.outer(grid.xi, grid.x)) @ values


def idft_oracle(values, grid):
    return grid.dxi / (2 * np.pi) * np.exp(-1j * np.outer(grid.x, grid.xi)) @ values


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("center", [0.0, 1.25, -3.0])
def test_forward_matches_direct_sum(center, rng):
    g = make_grid(128, 4.0, center)
    f = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    got = forward_ft(state(g, f)).values
    np.testing.assert_allclose(got, dft_oracle(f, g), atol=1e-11 * np.max(np.abs(got)))
    back = inverse_ft(fourier(g, got)).values
    np.testing.assert_allclose(back, idft_oracle(got, g), atol=1e-11)


def test_gaussian_pair():
    g = make_grid(1024, 8.0)
    fh = forward_ft(state(g, np.exp(-g.x ** 2) / np.sqrt(np.pi))).values
    assert np.max(np.abs(fh - np.exp(-g.xi ** 2 / 4))) < 1e-12
    f = inverse_ft(fourier(g, np.exp(-g.xi ** 2 / 4))).values
    assert np.max(np.abs(f - np.exp(-g.x ** 2) / np.sqrt(np.pi))) < 1e-12


def test_laplace_pair_converges():
    errs = []
    for N in (1024, 4096):
        g = make_grid(N, 32.0)
        fh = forward_ft(state(g, 0.5 * np.exp(-np.abs(g.x)))).values
        # Trapezoidal error of the kink at 0 is O(dx^2) at small xi.
        central = np.abs(g.xi) < 2.0
        errs.append(np.max(np.abs(fh - 1 / (1 + g.xi ** 2))[central]))
    assert errs[1] < errs[0] / 10 and errs[1] < 1e-4


def test_zero_and_side_errors():
    g = make_grid(16, 2.0)
    assert not np.any(forward_ft(state(g, np.zeros(16))).values)
    assert not np.any(inverse_ft(fourier(g, np.zeros(16))).values)
    with pytest.raises(SideError):
        forward_ft(fourier(g, np.zeros(16)))
    with pytest.raises(SideError):
        inverse_ft(state(g, np.zeros(16)))
    for op in (hilbert_sign, hilbert_sinc, hilbert_quadrature):
        with pytest.raises(SideError):
            op(state(g, np.zeros(16)))
        assert not np.any(op(fourier(g, np.zeros(16))).values)


def test_shape_validation():
    with pytest.raises(ValueError):
        state(make_grid(16, 2.0), np.zeros(8))


@given(st.integers(3, 16), st.integers(0, 2 ** 32 - 1), st.floats(-50, 50))
def test_round_trip_and_parseval(k, seed, center):
    N = 2 ** k
    g = make_grid(N, 1.0 + k, center)
    r = np.random.default_rng(seed)
    f = r.standard_normal(N) + 1j * r.standard_normal(N)
    fh = forward_ft(state(g, f)).values
    back = inverse_ft(fourier(g, fh)).values
    assert np.max(np.abs(back - f)) <= 1e-12 * np.max(np.abs(f))
    lhs = g.dx * np.sum(np.abs(f) ** 2)
    rhs = g.dxi / (2 * np.pi) * np.sum(np.abs(fh) ** 2)
    assert abs(lhs - rhs) <= 1e-10 * lhs


def test_sign_multiplier_examples():
    np.testing.assert_array_equal(sign_multiplier(make_grid(8, 1.0)), [0, -1, -1, -1, 0, 1, 1, 1])


@given(st.integers(3, 14))
def test_sign_multiplier_properties(k):
    s = sign_multiplier(make_grid(2 ** k, 1.0))
    assert s.sum() == 0 and set(np.unique(s)) <= {-1.0, 0.0, 1.0}
    assert s[0] == 0 and s[2 ** (k - 1)] == 0


def _random_fourier(N, seed, x_max=4.0):
    g = make_grid(N, x_max)
    r = np.random.default_rng(seed)
    return g, r.standard_normal(N) + 1j * r.standard_normal(N)


@given(st.integers(3, 12), st.integers(0, 2 ** 32 - 1))
def test_sign_involution(k, seed):
    N = 2 ** k
    g, _ = _random_fourier(N, seed)
    r = np.random.default_rng(seed)
    f = r.standard_normal(N)
    # Exact involution needs the two nodes where the sign array is zero to be empty.
    f[0] = f[N // 2] = 0.0
    F = forward_ft(state(g, f))
    twice = hilbert_sign(hilbert_sign(F)).values
    assert np.max(np.abs(twice - F.values)) <= 1e-12 * max(1.0, np.max(np.abs(F.values)))


@given(st.integers(3, 12), st.integers(0, 2 ** 32 - 1))
def test_sign_involution_defect_is_the_zero_nodes(k, seed):
    N = 2 ** k
    g, F = _random_fourier(N, seed)
    f = inverse_ft(fourier(g, F)).values
    kept = f.copy()
    kept[0] = kept[N // 2] = 0.0
    expected = forward_ft(state(g, kept)).values
    twice = hilbert_sign(hilbert_sign(fourier(g, F))).values
    assert np.max(np.abs(twice - expected)) <= 1e-12 * max(1.0, np.max(np.abs(F)))


def test_sign_eigenfunction_positive_support():
    g = make_grid(256, 8.0)
    f = np.where(g.x > 0, np.exp(-g.x), 0.0)
    F = forward_ft(state(g, f))
    assert np.max(np.abs(hilbert_sign(F).values - F.values)) < 1e-12
    fm = np.where(g.x < 0, np.exp(g.x), 0.0)
    fm[0] = 0.0
    Fm = forward_ft(state(g, fm))
    assert np.max(np.abs(hilbert_sign(Fm).values + Fm.values)) < 1e-12


@pytest.mark.parametrize("center", [0.0, 2.5])
def test_sign_uses_state_sign_about_zero(center, rng):
    # iH multiplies the conjugate samples by sgn(x) about x = 0 even on a shifted grid.
    g = make_grid(64, 4.0, center)
    F = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    g0 = make_grid(64, 4.0, 0.0)
    f0 = idft_oracle(F, g0)
    expected = dft_oracle(sign_multiplier(g0) * f0, g0)
    np.testing.assert_allclose(hilbert_sign(fourier(g, F)).values, expected, atol=1e-11)


@pytest.mark.parametrize("method", list(HilbertMethod))
def test_linearity(method, rng):
    g = make_grid(64, 4.0)
    u, v = rng.standard_normal((2, 64)) + 1j * rng.standard_normal((2, 64))
    al, be = 0.3 - 1.1j, 2.2 + 0.4j
    lhs = hilbert(fourier(g, al * u + be * v), method).values
    rhs = al * hilbert(fourier(g, u), method).values + be * hilbert(fourier(g, v), method).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * np.max(np.abs(lhs)))


def test_sinc_matches_dense_toeplitz(rng):
    N = 100
    g = make_grid(N, 4.0)
    F = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    d = np.subtract.outer(np.arange(N), np.arange(N))
    T = np.where(d % 2 != 0, 2 / (np.pi * np.where(d == 0, 1, d)), 0.0)
    plain = hilbert_sinc(fourier(g, F), hermitian=False).values
    np.testing.assert_allclose(plain, 1j * (T @ F), atol=1e-12 * N)
    herm = hilbert_sinc(fourier(g, F)).values
    Fh = F.copy()
    Fh[0] = 0
    expected = 1j * (T @ Fh)
    expected[0] = 0
    np.testing.assert_allclose(herm, expected, atol=1e-12 * N)


def test_sinc_keeps_real_functions_real():
    g = make_grid(512, 8.0)
    f = np.where(g.x > 0.3, np.exp(-g.x ** 2), 0.0)
    F = forward_ft(state(g, f))
    back = inverse_ft(hilbert_sinc(F)).values
    assert np.max(np.abs(back.imag)) < 1e-14


def test_sinc_involution_moment_free_input():
    # H6(xi) exp(-xi^2) has vanishing moments up to order 5, so its Hilbert image decays like xi^-7.
    for N in (512, 1024, 4096):
        g = make_grid(N, 16.0)
        F = fourier(g, hermval(g.xi, [0] * 6 + [1]) * np.exp(-g.xi ** 2) / 120.0)
        err = np.max(np.abs(hilbert_sinc(hilbert_sinc(F)).values - F.values))
        assert err <= 1e-6


def test_sinc_involution_gaussian_is_truncation_limited():
    # The Hilbert image of exp(-xi^2) decays like 1/(pi xi); cutting it at xi_max
    # leaves an O(1/xi_max) defect after the second application.
    errs = []
    for N in (512, 1024, 4096):
        g = make_grid(N, 8.0)
        F = fourier(g, np.exp(-g.xi ** 2))
        errs.append(np.max(np.abs(hilbert_sinc(hilbert_sinc(F)).values - F.values)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] * 4096 / 512 < 1.5 * errs[0]


def test_sinc_vs_quadrature_gaussian():
    g = make_grid(1024, 8.0)
    F = fourier(g, np.exp(-g.xi ** 2))
    q = hilbert_quadrature(F).values
    assert np.max(np.abs(hilbert_sinc(F, hermitian=False).values - q)) <= 1e-8
    # The hermitian variant drops the unmatched node -N/2 and agrees everywhere else.
    assert np.max(np.abs(hilbert_sinc(F).values - q)[1:]) <= 1e-8


def _cauchy_pair_error(op, N, x_max=None):
    g = make_grid(N, x_max or N / 64)
    F = fourier(g, 1 / (np.pi * (1 + g.xi ** 2)))
    expected = g.xi / (np.pi * (1 + g.xi ** 2))
    central = np.abs(g.xi) <= 4.0
    return np.max(np.abs(op(F).values / 1j - expected)[central])


@pytest.mark.parametrize("op", [hilbert_sinc, hilbert_quadrature])
def test_cauchy_pair_improves_with_n(op):
    # Same xi range with a finer xi step; the truncated tails give O(1/xi_max) error.
    errs = [_cauchy_pair_error(op, N, x_max=4.0) for N in (256, 512, 1024)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 2e-2


def test_quadrature_constant_small_at_center():
    errs = []
    for N in (128, 512, 2048):
        g = make_grid(N, 4.0)
        h = hilbert_quadrature(fourier(g, np.ones(N))).values
        errs.append(np.max(np.abs(h[N // 2 - 2:N // 2 + 3])))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 8.0 / 2048


@pytest.mark.parametrize("order", [2, 3, 4])
def test_quadrature_orders_agree_on_decaying_input(order):
    g = make_grid(512, 8.0)
    F = fourier(g, np.exp(-g.xi ** 2))
    ref = hilbert_quadrature(F, 2).values
    assert np.max(np.abs(hilbert_quadrature(F, order).values - ref)) < 1e-12


def test_quadrature_rejects_order():
    g = make_grid(16, 1.0)
    with pytest.raises(ValueError):
        hilbert_quadrature(fourier(g, np.ones(16)), order=5)


def test_sign_approaches_quadrature():
    g_err, c_err = [], []
    for N in (256, 1024, 4096):
        g = make_grid(N, 8.0)
        F = fourier(g, np.exp(-g.xi ** 2))
        d = np.abs(hilbert_sign(F).values - hilbert_quadrature(F).values)
        g_err.append(d.max())
        c_err.append(d[np.abs(g.xi) < 10].max())
    # Periodic image of the 1/xi tail: O(1/N) at the ends, O(1/N^2) in the middle.
    assert g_err[0] > g_err[1] > g_err[2]
    assert c_err[0] > 10 * c_err[1] > 100 * c_err[2]
