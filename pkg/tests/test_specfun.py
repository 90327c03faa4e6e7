import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammagrey.errors import ConvergenceError, DomainError, PoleError, SeriesNotConverged
from gammagrey.specfun import (
    HypergeometricArgs,
    incomplete_gamma_ratio,
    kummer_1f1,
    pochhammer,
    tricomi_psi,
    tricomi_psi_array,
    upper_incomplete_gamma,
)

mpmath.mp.dps = 30

rhos = st.floats(0.05, 1.0)
re_z = st.floats(0.01, 60.0)
im_z = st.floats(-80.0, 80.0)


def mp_gamma_inc(rho, z):
    return complex(mpmath.gammainc(rho, z))


@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9, 1.0])
@pytest.mark.parametrize("z", [1e-6, 0.3, 1.0, 7.5, 40.0, 300.0])
def test_gamma_real_matches_mpmath(rho, z):
    got = upper_incomplete_gamma(rho, z)
    assert isinstance(got, float)
    assert got == pytest.approx(mp_gamma_inc(rho, z).real, rel=1e-11, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(rhos, re_z, im_z)
def test_gamma_complex_matches_mpmath(rho, x, y):
    z = complex(x, y)
    ref = mp_gamma_inc(rho, z)
    assert abs(upper_incomplete_gamma(rho, z) - ref) <= 1e-10 * abs(ref) + 1e-300


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), re_z, im_z)
def test_gamma_recurrence(rho, x, y):
    # Γ(ρ+1, z) = ρ Γ(ρ, z) + z^ρ e^{-z}
    z = complex(x, y)
    lhs = upper_incomplete_gamma(rho + 1.0, z)
    rhs = rho * upper_incomplete_gamma(rho, z) + z**rho * np.exp(-z)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


@settings(max_examples=30, deadline=None)
@given(rhos, re_z, st.floats(0.0, 80.0))
def test_gamma_conjugate_symmetry(rho, x, y):
    z = complex(x, y)
    assert upper_incomplete_gamma(rho, z.conjugate()) == pytest.approx(upper_incomplete_gamma(rho, z).conjugate(), rel=1e-12)


def test_gamma_at_zero_and_rho_one():
    assert upper_incomplete_gamma(0.4, 0.0) == pytest.approx(math.gamma(0.4), rel=1e-15)
    for z in (0.2, 3.0, 2.0 + 5.0j):
        assert upper_incomplete_gamma(1.0, z) == pytest.approx(np.exp(-z), rel=1e-12)


def test_gamma_vectorised():
    z = np.array([[0.5, 1.0], [2.0, 4.0]])
    out = upper_incomplete_gamma(0.3, z)
    assert out.shape == (2, 2) and out.dtype == float
    assert out[1, 0] == pytest.approx(upper_incomplete_gamma(0.3, 2.0), rel=1e-15)


@pytest.mark.parametrize("rho,z", [(0.0, 1.0), (-0.5, 1.0), (0.5, -1.0), (0.5, -1.0 + 1.0j), (0.5, 1.0j)])
def test_gamma_domain_errors(rho, z):
    with pytest.raises(DomainError):
        upper_incomplete_gamma(rho, z)


def test_gamma_convergence_error_is_reported():
    with pytest.raises(ConvergenceError):
        upper_incomplete_gamma(0.5, 1.0 + 1e7j, tol=1e-30)


def test_ratio_at_zero_shift():
    assert incomplete_gamma_ratio(0.6, 1.3, 0.0) == pytest.approx(1.0, rel=1e-15)


def test_pochhammer():
    assert pochhammer(0.5, 0) == 1.0
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


@pytest.mark.parametrize("a,c,z", [(0.5, 1.5, 2.0), (-1.5, 0.3, 4.0 + 1.0j), (1.0, -0.5, -3.0), (2.0, 3.0, 10.0)])
def test_kummer_matches_mpmath(a, c, z):
    ref = complex(mpmath.hyp1f1(a, c, z))
    assert abs(kummer_1f1(a, c, z) - ref) <= 1e-12 * abs(ref)


def test_kummer_args_record_and_errors():
    assert kummer_1f1(HypergeometricArgs(0.5, 1.5, 1.0)) == pytest.approx(complex(mpmath.hyp1f1(0.5, 1.5, 1.0)))
    with pytest.raises(PoleError):
        kummer_1f1(1.0, -2.0, 1.0)
    with pytest.raises(SeriesNotConverged) as info:
        kummer_1f1(0.5, 1.5, 50.0, max_terms=5)
    assert info.value.n_terms == 5


@pytest.mark.parametrize("a", [0.05, 0.5, 0.9, 1.7])
@pytest.mark.parametrize("c", [-2.5, -0.5, 0.5, 1.0, 2.3])
@pytest.mark.parametrize("z", [0.02, 0.7, 5.0, 3.0 + 4.0j, 60.0])
def test_psi_integral_matches_mpmath(a, c, z):
    ref = complex(mpmath.hyperu(a, c, z))
    assert abs(tricomi_psi(a, c, z) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("a,c,z", [(0.5, 0.5, 1.2), (0.3, -1.5, 2.0), (0.8, 0.25, 0.6 + 0.4j)])
def test_psi_series_agrees_with_integral(a, c, z):
    assert tricomi_psi(a, c, z, method="series") == pytest.approx(tricomi_psi(a, c, z), rel=1e-10)


def test_psi_special_cases_and_errors():
    assert tricomi_psi(0.0, 0.3, 1.0) == 1.0
    with pytest.raises(PoleError):
        tricomi_psi(0.5, 2.0, 1.0, method="series")
    with pytest.raises(DomainError):
        tricomi_psi(0.5, 0.5, -1.0)
    with pytest.raises(DomainError):
        tricomi_psi(-0.5, 0.5, 1.0)
    with pytest.raises(ValueError):
        tricomi_psi(0.5, 0.5, 1.0, method="nope")


def test_psi_array():
    z = np.array([0.5, 1.0, 2.0 + 1.0j])
    got = tricomi_psi_array(0.5, 0.0, z)
    want = [tricomi_psi(0.5, 0.0, v) for v in z]
    np.testing.assert_allclose(got, want, rtol=1e-15)
    np.testing.assert_array_equal(tricomi_psi_array(0.0, 1.0, z), np.ones(3))


def test_gamma_one_is_exponential_on_log_grid():
    x = np.logspace(-8, 2.5, 60)
    np.testing.assert_allclose(upper_incomplete_gamma(1.0, x), np.exp(-x), rtol=1e-12)


@pytest.mark.parametrize("rho", np.round(np.arange(0.1, 1.0, 0.1), 1))
def test_gamma_at_origin_is_complete_gamma(rho):
    assert upper_incomplete_gamma(rho, 0.0) == pytest.approx(math.gamma(rho), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(rhos)
def test_gamma_strictly_decreasing_in_x(rho):
    x = np.linspace(0.0, 30.0, 301)
    assert np.all(np.diff(upper_incomplete_gamma(rho, x)) < 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(-3.0, 3.0).filter(lambda c: abs(c - round(c)) > 1e-2), st.floats(0.1, 8.0))
def test_psi_paths_agree_on_sweep(a, c, z):
    integral = tricomi_psi(a, c, z)
    # the two Kummer terms cancel as z grows; rounding scales with their size, not with Ψ
    first = math.gamma(1 - c) / math.gamma(1 + a - c) * kummer_1f1(a, c, z)
    second = math.gamma(c - 1) / math.gamma(a) * z ** (1 - c) * kummer_1f1(1 + a - c, 2 - c, z)
    scale = abs(first) + abs(second)
    assert abs(tricomi_psi(a, c, z, method="series") - integral) <= 1e-12 * scale + 1e-12 * abs(integral)
    assert abs(integral - complex(mpmath.hyperu(a, c, z))) <= 1e-11 * abs(integral)
