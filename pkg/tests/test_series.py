import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from convmeans.series import (
    CATALOG_NAMES,
    GrowthClass,
    SeriesError,
    TruncatedSeries,
    catalog,
    divide_by_z,
    formal_sqrt,
    hadamard,
    iterate_convolution,
    odd_sqrt_transform,
    reciprocal,
)

z = sp.symbols("z")
SYMPY_FORMS = {
    "I": 1 / (1 - z),
    "koebe": z / (1 - z) ** 2,
    "k2": z / (1 - z**2),
    "J": 1 / (1 - z**2),
    "inv_sq": 1 / (1 - z) ** 2,
    "one_minus_half_z": 1 - z / 2,
    "one_minus_z": 1 - z,
    "strip": sp.log((1 + z) / (1 - z)),
    "cayley": z / (1 - z),
    "halfplane_conv": z - z**2 / 2,
    "z": z,
}


def sympy_coeffs(expr, n):
    poly = sp.series(expr, z, 0, n + 1).removeO()
    return np.array([complex(poly.coeff(z, k)) for k in range(n + 1)])


coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
vectors = st.integers(1, 12).flatmap(lambda n: st.lists(coef, min_size=n, max_size=n))


def exact(c):
    return TruncatedSeries.from_coeffs(c)


# ---- catalog: sympy Taylor expansion as oracle


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_matches_sympy_expansion(name):
    got = catalog(name, 14).coeffs
    np.testing.assert_allclose(got, sympy_coeffs(SYMPY_FORMS[name], 14), rtol=0, atol=1e-15)


def test_catalog_examples():
    assert catalog("I", 3).coeffs.tolist() == [1, 1, 1, 1]
    assert catalog("J", 4).coeffs.tolist() == [1, 0, 1, 0, 1]
    assert catalog("koebe", 4).coeffs.tolist() == [0, 1, 2, 3, 4]


def test_catalog_unknown_name():
    with pytest.raises(SeriesError):
        catalog("nope")


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_tail_bound_dominates_true_tail(name):
    # true tail at r from a longer exact expansion
    short, long_ = catalog(name, 40), catalog(name, 400)
    r = 0.7
    n = np.arange(41, 401)
    true_tail = float(np.sum(np.abs(long_.coeffs[41:]) * r**n))
    assert short.tail_bound(r) >= true_tail - 1e-15


# ---- hadamard


def test_hadamard_identity_and_convexity_pair():
    I = catalog("I", 32)
    assert np.array_equal(hadamard(I, I).coeffs, I.coeffs)
    out = hadamard(catalog("inv_sq", 32), catalog("one_minus_half_z", 32))
    want = np.zeros(33)
    want[:2] = (1, -1)
    assert np.array_equal(out.coeffs, want)
    assert out.growth.finite


def test_hadamard_zero_annihilates():
    f = catalog("koebe", 10)
    zero = exact(np.zeros(11))
    assert not np.any(hadamard(f, zero).coeffs)


def test_hadamard_keeps_shorter_length_and_product_growth():
    f, g = catalog("koebe", 10), catalog("inv_sq", 6)
    h = hadamard(f, g)
    assert len(h) == 7
    assert h.growth.degree == 2


@given(vectors, st.data())
def test_hadamard_commutative_associative_bilinear(a, data):
    n = len(a)
    b = data.draw(st.lists(coef, min_size=n, max_size=n))
    c = data.draw(st.lists(coef, min_size=n, max_size=n))
    lam = data.draw(coef)
    A, B, C = exact(a), exact(b), exact(c)
    assert np.array_equal(hadamard(A, B).coeffs, hadamard(B, A).coeffs)
    lhs = hadamard(hadamard(A, B), C).coeffs
    rhs = hadamard(A, hadamard(B, C)).coeffs
    np.testing.assert_allclose(lhs, rhs, rtol=1e-14, atol=1e-300)
    mix = exact(np.asarray(a) * lam + np.asarray(b))
    np.testing.assert_allclose(
        hadamard(mix, C).coeffs,
        lam * hadamard(A, C).coeffs + hadamard(B, C).coeffs,
        rtol=1e-12,
        atol=1e-10,
    )
    I = catalog("I", n - 1)
    assert np.array_equal(hadamard(I, A).coeffs, A.coeffs)


# ---- odd square root: sympy formal expansion as oracle


def test_odd_sqrt_of_koebe_is_k2():
    h = odd_sqrt_transform(catalog("koebe", 30))
    np.testing.assert_allclose(h.coeffs, catalog("k2", 59).coeffs, atol=1e-13)


def test_odd_sqrt_of_identity():
    h = odd_sqrt_transform(catalog("z", 5))
    want = np.zeros(h.coeffs.size)
    want[1] = 1
    np.testing.assert_allclose(h.coeffs, want, atol=0)


def test_odd_sqrt_low_coefficients_against_sympy():
    A2, A3 = sp.symbols("A2 A3")
    w = sp.symbols("w")
    expr = sp.sqrt(1 + A2 * w + A3 * w**2)
    ser = sp.series(expr, w, 0, 3).removeO()
    c3, c5 = ser.coeff(w, 1), ser.coeff(w, 2)
    for a2, a3 in [(0.3 + 0.1j, -0.2j), (1.7, 2.4 - 0.5j), (-1.1j, 0.9)]:
        h = odd_sqrt_transform(exact([0, 1, a2, a3]))
        sub = {A2: a2, A3: a3}
        assert abs(h.coeffs[3] - complex(c3.subs(sub))) < 1e-14
        assert abs(h.coeffs[5] - complex(c5.subs(sub))) < 1e-14
        # closed form used elsewhere
        assert abs(h.coeffs[5] - (a3 / 2 - a2**2 / 8)) < 1e-14


@given(st.lists(coef, min_size=1, max_size=10))
def test_odd_sqrt_squares_back(tail):
    H = exact([0.0, 1.0, *tail])
    h = odd_sqrt_transform(H)
    assert not np.any(h.coeffs[0::2])
    sq = np.convolve(h.coeffs, h.coeffs)[: 2 * len(H) - 1]
    recomposed = np.zeros_like(sq)
    recomposed[0::2] = H.coeffs[: sq[0::2].size]
    # rounding scales with the largest products formed in the convolution
    scale = max(1.0, float(np.max(np.abs(h.coeffs)))) ** 2 * len(h)
    np.testing.assert_allclose(sq, recomposed, rtol=0, atol=1e-13 * scale)


def test_odd_sqrt_errors():
    with pytest.raises(SeriesError):
        odd_sqrt_transform(exact([1.0, 1.0]))
    with pytest.raises(SeriesError):
        odd_sqrt_transform(exact([0.0, 0.0, 1.0]))


# ---- divide_by_z and iterate_convolution


def test_divide_by_z_examples():
    assert np.array_equal(divide_by_z(catalog("k2", 9)).coeffs, catalog("J", 8).coeffs)
    assert divide_by_z(catalog("z", 1)).coeffs.tolist() == [1]
    assert divide_by_z(catalog("koebe", 5)).coeffs.tolist() == [1, 2, 3, 4, 5]
    with pytest.raises(SeriesError):
        divide_by_z(catalog("I", 3))


@given(st.lists(coef, min_size=1, max_size=8), st.integers(1, 5), st.integers(1, 5))
def test_iterate_convolution_is_additive(c, m, n):
    h1 = exact(c)
    lhs = iterate_convolution(h1, m + n).coeffs
    rhs = hadamard(iterate_convolution(h1, m), iterate_convolution(h1, n)).coeffs
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-300)


def test_iterate_convolution_examples():
    J = catalog("J", 12)
    h1 = TruncatedSeries([1, 0, 0.4, 0, 1.02], GrowthClass.bounded(1.1))
    assert np.array_equal(iterate_convolution(h1, 1).coeffs, h1.coeffs)
    for n in (1, 2, 7):
        assert np.array_equal(iterate_convolution(J, n).coeffs, J.coeffs)
    mods = [abs(iterate_convolution(h1, n).coeffs[4]) for n in range(1, 40)]
    assert all(b > a for a, b in zip(mods, mods[1:]))
    with pytest.raises(SeriesError):
        iterate_convolution(h1, 0)


# ---- growth classes and formal arithmetic


def test_envelope_checked_on_construction():
    with pytest.raises(SeriesError):
        TruncatedSeries([0, 1, 2], GrowthClass.bounded(1.0))
    TruncatedSeries([0, 1, 2], GrowthClass.polynomial(1))


@given(st.floats(0.05, 0.95), st.integers(0, 3), st.integers(0, 60))
def test_tail_bound_against_direct_sum(r, d, order):
    g = GrowthClass.polynomial(d, 1.5)
    n = np.arange(order + 1, order + 20000)
    direct = 1.5 * float(np.sum((n + 1.0) ** d * r**n))
    assert g.tail_bound(order, r) == pytest.approx(direct, rel=1e-9, abs=1e-300)


def test_tail_bound_divergent_and_finite():
    assert math.isinf(GrowthClass.bounded().tail_bound(5, 1.0))
    assert GrowthClass.exact().tail_bound(5, 0.99) == 0.0
    assert GrowthClass.geometric(0.5).tail_bound(0, 0.5) == pytest.approx(0.25 / 0.75)


@given(st.lists(coef, min_size=2, max_size=10))
def test_formal_sqrt_and_reciprocal(u):
    u = np.asarray(u)
    u[0] = 0
    s = formal_sqrt(u)
    sq = np.convolve(s, s)[: u.size]
    target = u.copy()
    target[0] = 1
    scale = max(1.0, float(np.max(np.abs(sq))))
    np.testing.assert_allclose(sq, target, atol=1e-10 * scale)
    a = target
    g = reciprocal(a)
    prod = np.convolve(a, g)[: a.size]
    unit = np.zeros(a.size)
    unit[0] = 1
    np.testing.assert_allclose(prod, unit, atol=1e-8 * max(1.0, float(np.max(np.abs(g)))))


def test_json_roundtrip():
    f = catalog("strip", 9)
    g = TruncatedSeries.from_json(f.to_json())
    assert np.array_equal(f.coeffs, g.coeffs) and f.growth == g.growth and g.name == "strip"


def test_derivative_and_call():
    f = catalog("koebe", 30)
    df = f.derivative()
    assert df.coeffs[:4].tolist() == [1, 4, 9, 16]
    zz = np.array([0.3, -0.2 + 0.1j])
    np.testing.assert_allclose(f(zz), zz / (1 - zz) ** 2, rtol=1e-12)
