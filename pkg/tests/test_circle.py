import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convmeans.circle import (
    DEFAULT_R_GRID,
    CircleError,
    RingSamples,
    hardy_norm,
    integral_mean,
    integral_mean_err,
    parseval_mean_sq,
    sample_circle,
)
from convmeans.series import CATALOG_NAMES, TruncatedSeries, catalog

N = 2047
M = 4096


def horner(coeffs, z):
    # independent evaluation: numpy's polyval with reversed coefficients
    return np.polyval(np.asarray(coeffs)[::-1], z)


def test_constant_samples():
    s = sample_circle(TruncatedSeries.from_coeffs([2.5 - 1j]), 0.4, 64)
    np.testing.assert_allclose(s.values, 2.5 - 1j, atol=1e-15)
    assert s.err_bound == 0.0
    for p in (0.5, 1, 3, math.inf):
        assert integral_mean(s, p) == pytest.approx(abs(2.5 - 1j), rel=1e-14)


def test_geometric_sum_at_zero_angle():
    s = sample_circle(catalog("I", N), 0.5, M)
    assert abs(s.values[0] - 2.0) <= s.err_bound + 1e-12


def test_koebe_at_minus_half():
    s = sample_circle(catalog("koebe", N), 0.5, M)
    assert abs(s.values[M // 2] - (-2.0 / 9.0)) <= s.err_bound + 1e-12


@pytest.mark.parametrize("name", ["koebe", "strip", "I"])
def test_samples_match_closed_forms(name):
    forms = {
        "koebe": lambda z: z / (1 - z) ** 2,
        "strip": lambda z: np.log((1 + z) / (1 - z)),
        "I": lambda z: 1 / (1 - z),
    }
    for r in (0.3, 0.9, 0.99):
        s = sample_circle(catalog(name, N), r, M)
        want = forms[name](r * np.exp(1j * s.t))
        assert np.max(np.abs(s.values - want)) <= s.err_bound + 1e-9 * np.max(np.abs(want))


def test_samples_match_horner():
    rng = np.random.default_rng(3)
    c = rng.normal(size=40) + 1j * rng.normal(size=40)
    f = TruncatedSeries.from_coeffs(c)
    s = sample_circle(f, 0.8, 128)
    np.testing.assert_allclose(s.values, horner(c, 0.8 * np.exp(1j * s.t)), atol=1e-11)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_parseval(name):
    f = catalog(name, N)
    for r in DEFAULT_R_GRID:
        s = sample_circle(f, r, M)
        m2, err = integral_mean_err(s, 2)
        oracle = parseval_mean_sq(f, r)
        assert abs(m2**2 - oracle) <= 3 * (err * (2 * m2 + err) + 1e-12 * oracle) + 1e-15


def test_I_mean_square_closed_form():
    for r in (0.2, 0.6, 0.95):
        m2, err = integral_mean_err(sample_circle(catalog("I", N), r, M), 2)
        assert abs(m2 - (1 - r * r) ** -0.5) <= err + 1e-12


def test_I_max_modulus():
    for r in DEFAULT_R_GRID:
        v, err = integral_mean_err(sample_circle(catalog("I", N), r, M), math.inf)
        assert abs(v - 1 / (1 - r)) <= err + 1e-9


@pytest.mark.parametrize("name", ["I", "koebe", "strip", "one_minus_z", "cayley"])
def test_means_monotone_in_r_and_p(name):
    f = catalog(name, N)
    ps = (0.5, 1.0, 2.0, 4.0, math.inf)
    table = {(r, p): integral_mean_err(sample_circle(f, r, M), p) for r in DEFAULT_R_GRID for p in ps}
    for p in ps:
        for r0, r1 in zip(DEFAULT_R_GRID, DEFAULT_R_GRID[1:]):
            (a, ea), (b, eb) = table[(r0, p)], table[(r1, p)]
            assert a <= b + ea + eb + 1e-12
    for r in DEFAULT_R_GRID:
        for p0, p1 in zip(ps, ps[1:]):
            (a, ea), (b, eb) = table[(r, p0)], table[(r, p1)]
            assert a <= b + ea + eb + 1e-12


@given(st.integers(1, 20), st.integers(1, 3), st.integers(0, 2**31))
def test_quadrature_exact_for_trig_polynomials(deg, half_p, seed):
    p = 2 * half_p
    rng = np.random.default_rng(seed)
    c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    f = TruncatedSeries.from_coeffs(c)
    Mq = 8
    while Mq <= p * deg or Mq < 2 * len(f):
        Mq *= 2
    s = sample_circle(f, 0.7, Mq)
    # exact mean of |f|^p from a dense grid oracle
    t = 2 * np.pi * np.arange(8192) / 8192
    dense = np.mean(np.abs(horner(c, 0.7 * np.exp(1j * t))) ** p) ** (1 / p)
    assert integral_mean(s, p) == pytest.approx(dense, rel=1e-12)


def test_hardy_norm():
    c = TruncatedSeries.from_coeffs([3.0])
    assert hardy_norm(c, 0.5) == pytest.approx(3.0)
    I = catalog("I", N)
    # I lies in H^{1/2}: the grid value at 0.99 stays below the value at 0.999
    fine = catalog("I", 8191)
    top = integral_mean(sample_circle(fine, 0.999, 16384), 0.5)
    assert hardy_norm(I, 0.5) <= top
    # I is not in H^2: M_2 grows like (1 - r^2)^{-1/2}
    grid = (0.5, 0.9, 0.99)
    vals = [hardy_norm(I, 2, r_grid=grid[: k + 1]) for k in range(3)]
    assert vals[-1] > 7 and vals[0] < vals[1] < vals[2]
    with pytest.raises(CircleError):
        hardy_norm(I, -1)


def test_log_abs_error_propagation():
    s = sample_circle(catalog("one_minus_z", N), 0.99, M)
    u = s.log_abs()
    assert u.err_bound == 0.0 and u.values.min() == pytest.approx(math.log(0.01), rel=1e-9)
    t = sample_circle(catalog("I", N), 0.9, M).log_abs()
    assert 0 < t.err_bound < 1e-6


def test_validation():
    with pytest.raises(CircleError):
        RingSamples(1.0, np.ones(8))
    with pytest.raises(CircleError):
        RingSamples(0.5, np.ones(12))
    with pytest.raises(CircleError):
        sample_circle(catalog("I", 10), 0.5, 16)
    with pytest.raises(CircleError):
        integral_mean(RingSamples(0.5, np.ones(8)), 0)
