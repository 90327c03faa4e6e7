import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammagrey.errors import DomainError, GridMismatchError
from gammagrey.pairing import (
    ComplexTestFunction,
    GridFunction,
    QuadraticFamily,
    bilinear,
    bilinear_self,
    in_U_theta,
    inner,
    norm_sq,
    quad_form_S,
)

from conftest import gaussian_bump

coef = st.floats(-2.0, 2.0)


def test_simpson_exact_for_cubics():
    f = GridFunction.from_callable(lambda x: x**3 - 2 * x + 1, 0.0, 2.0, 11)
    g = GridFunction.from_callable(lambda x: np.ones_like(x), 0.0, 2.0, 11)
    assert inner(f, g) == pytest.approx(4.0 - 4.0 + 2.0, abs=1e-14)


def test_gaussian_norm_converges():
    for n in (401, 1601):
        f = gaussian_bump(0.0, 1.0, 1.0, n=n)
        assert norm_sq(f) == pytest.approx(np.sqrt(np.pi), rel=1e-12)


def test_grid_validation_and_mismatch():
    with pytest.raises(DomainError):
        GridFunction(1.0, 0.0, 3, [0, 0, 0])
    with pytest.raises(DomainError):
        GridFunction(0.0, 1.0, 3, [0, 0])
    with pytest.raises(DomainError):
        GridFunction(0.0, 1.0, 2, [0, np.nan])
    a = gaussian_bump(n=101)
    b = gaussian_bump(n=103)
    with pytest.raises(GridMismatchError):
        inner(a, b)
    with pytest.raises(ValueError):  # GridMismatchError is a ValueError
        _ = a + b


def test_values_are_read_only_and_json_round_trip():
    f = gaussian_bump(0.3, 0.5, n=51)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    g = GridFunction.from_json(f.to_json())
    assert g.same_grid(f)
    np.testing.assert_array_equal(g.values, f.values)


@settings(max_examples=40, deadline=None)
@given(coef, coef, coef, coef, st.floats(-5.0, 5.0))
def test_quadratic_form_identity(a1, a2, b1, b2, s):
    eta = gaussian_bump(0.1, 0.8, 1.0, n=401)
    xi = ComplexTestFunction(a1 * gaussian_bump(-0.5, 0.6, n=401), b1 * gaussian_bump(0.7, 0.9, n=401))
    xi = xi + ComplexTestFunction(a2 * eta, b2 * eta)
    S = QuadraticFamily(eta, xi)(s)
    combo = ComplexTestFunction.real(s * eta) + xi
    assert S == pytest.approx(0.5 * bilinear_self(combo), rel=1e-12, abs=1e-12)
    q = quad_form_S(s, eta, xi)
    assert q.re_part == pytest.approx(S.real) and -np.pi < q.arg <= np.pi


@settings(max_examples=30, deadline=None)
@given(coef, coef, coef, coef)
def test_bilinear_symmetric_and_linear(a, b, c, d):
    x = ComplexTestFunction(a * gaussian_bump(-1, n=201), b * gaussian_bump(1, n=201))
    y = ComplexTestFunction(c * gaussian_bump(0, n=201), d * gaussian_bump(0.5, n=201))
    assert bilinear(x, y) == pytest.approx(bilinear(y, x), abs=1e-13)
    lam = complex(a, d)
    assert bilinear(x.scale(lam), y) == pytest.approx(lam * bilinear(x, y), abs=1e-12)


def test_bilinear_self_matches_formula(xi_complex):
    n1, n2 = norm_sq(xi_complex.xi1), norm_sq(xi_complex.xi2)
    want = complex(n1 - n2, 2 * inner(xi_complex.xi1, xi_complex.xi2))
    assert bilinear_self(xi_complex) == pytest.approx(want, rel=1e-14)


def test_U_theta_is_open():
    f = gaussian_bump(n=801)
    theta = norm_sq(f)
    assert not in_U_theta(f, theta)
    assert in_U_theta(f, theta * (1 + 1e-12))
    assert not in_U_theta(ComplexTestFunction.imag(f), theta)
    with pytest.raises(DomainError):
        in_U_theta(f, 0.0)


@settings(max_examples=30, deadline=None)
@given(coef, coef)
def test_inner_is_bilinear(a, b):
    f, g, h = gaussian_bump(-1, n=301), gaussian_bump(0.5, 0.4, n=301), gaussian_bump(0.2, 2.0, n=301)
    assert inner(a * f + b * g, h) == pytest.approx(a * inner(f, h) + b * inner(g, h), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(coef, st.floats(-50.0, 50.0))
def test_S_nonnegative_for_real_xi(a, s):
    eta = gaussian_bump(0.1, 0.8, n=401)
    xi = ComplexTestFunction.real(a * gaussian_bump(-0.6, 1.1, n=401))
    assert quad_form_S(s, eta, xi).value.real >= -1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.0, 0.999), st.floats(0.0, 0.999))
def test_re_argument_positive_on_U_theta(theta, f1, f2):
    eta = gaussian_bump(0.3, 0.9, n=401)
    u1, u2 = gaussian_bump(-0.5, 0.7, n=401), gaussian_bump(0.8, 0.6, n=401)
    xi = ComplexTestFunction(u1 * math.sqrt(f1 * theta / norm_sq(u1)), u2 * math.sqrt(f2 * theta / norm_sq(u2)))
    assert in_U_theta(xi, theta)
    S = QuadraticFamily(eta, xi)(np.linspace(-50, 50, 2001))
    assert np.all(theta + S.real > 0.0)
