import math

import numpy as np
import pytest

from gammagrey.errors import DomainError
from gammagrey.fracops import fbm_covariance
from gammagrey.functionals import s_transform_prefactor
from gammagrey.ggbm import (
    char_fn_ggbm,
    consistent_noise_bound,
    literal_noise_bound,
    literal_noise_prefactor,
    m_plus_sup,
    noise_difference_quotient,
    noise_s_transform,
    s_transform_ggbm,
    simulate_ggbm,
)
from gammagrey.mixing import GreyParams, mean_R
from gammagrey.pairing import ComplexTestFunction

from conftest import gaussian_bump


def _xi(amp=0.4, width=0.7):
    return ComplexTestFunction.real(gaussian_bump(0.5, width, amp, lo=-8, hi=8, n=3201))


def test_covariance_is_mixed_fbm(params):
    t = np.array([0.25, 0.5, 1.0])
    s = simulate_ggbm(0.6, params, t, 60_000, seed=8)
    cov = np.cov(s.paths.T)
    want = mean_R(params) * fbm_covariance(0.6, t[:, None], t[None, :])
    np.testing.assert_allclose(cov, want, atol=0.03)
    assert s.extra["K_alpha"] > 0 and s.R.shape == (60_000,)


def test_simulation_reproducible_and_validates(params):
    t = [0.5, 1.0]
    a = simulate_ggbm(1.3, params, t, 10, seed=1).paths
    b = simulate_ggbm(1.3, params, t, 10, seed=1).paths
    np.testing.assert_array_equal(a, b)
    with pytest.raises(DomainError):
        simulate_ggbm(1.3, params, t, 0, seed=1)


def test_char_fn_brownian_limit():
    p = GreyParams(1.0, 2.0)
    assert char_fn_ggbm(1.0, p, 1.5, 0.8) == pytest.approx(math.exp(-0.5 * 0.64 * 1.5), rel=1e-12)
    with pytest.raises(DomainError):
        char_fn_ggbm(1.0, p, 0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5])
def test_s_transform_routes_agree(params, alpha):
    xi = _xi()
    d = s_transform_ggbm(alpha, params, 1.2, xi, route="direct")
    u = s_transform_ggbm(alpha, params, 1.2, xi, route="duality")
    assert d == pytest.approx(u, abs=1e-5)
    with pytest.raises(ValueError):
        s_transform_ggbm(alpha, params, 1.2, xi, route="bogus")


@pytest.mark.parametrize("alpha", [0.7, 1.4])
def test_difference_quotients_converge_linearly(params, alpha):
    xi = _xi()
    t = 0.8
    target = noise_s_transform(alpha, params, t, xi)
    errs = [abs(noise_difference_quotient(alpha, params, t, h, xi) - target) for h in (0.04, 0.02, 0.01)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    assert all(1.6 < r < 2.4 for r in ratios)


def test_noise_domain(params):
    with pytest.raises(DomainError):
        noise_s_transform(0.7, params, 20.0, _xi())
    with pytest.raises(DomainError):
        noise_s_transform(0.7, params, 0.5, _xi(amp=2.0))


def test_literal_prefactor_carries_extra_gamma_factor(params):
    xi = _xi(amp=0.3)
    ratio = literal_noise_prefactor(params, xi) / s_transform_prefactor(params, xi).real
    # differs by more than rounding: the literal version is not the chain-rule derivative
    assert abs(abs(ratio) - 1.0) > 0.1


@pytest.mark.parametrize("rho,theta", [(0.5, 1.0), (0.3, 2.0), (0.8, 0.5)])
def test_literal_prefactor_satisfies_stated_bound(rho, theta):
    # the stated uniform bound is a property of the displayed prefactor
    p = GreyParams(rho, theta)
    for amp in (0.05, 0.3, 0.6):
        assert abs(literal_noise_prefactor(p, _xi(amp=amp))) < math.exp(-theta) * theta ** (rho - 1)


def test_consistent_bound_holds(params):
    for amp in (0.1, 0.3, 0.6):
        xi = _xi(amp=amp)
        for t in (0.3, 1.0, 2.0):
            assert abs(noise_s_transform(1.3, params, t, xi)) <= consistent_noise_bound(params, 1.3, xi)


def test_bounds_scale_with_m_plus(params):
    xi = _xi()
    sup = m_plus_sup(0.8, xi)
    assert literal_noise_bound(params, 0.8, xi) == pytest.approx(math.exp(-1.0) * sup)
    assert consistent_noise_bound(params, 0.8, xi) == pytest.approx(2.0 * sup)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_self_similar_marginals(params, alpha):
    # two-sample KS at the 5% level over 20 seeds; P(more than 4 rejections) = 1.6% under the null
    from scipy import stats

    rejections = 0
    for seed in range(20):
        s = simulate_ggbm(alpha, params, [0.5, 2.0], 20_000, seed=500 + seed)
        a = s.paths[:10_000, 0] / 0.5 ** (alpha / 2)
        b = s.paths[10_000:, 1] / 2.0 ** (alpha / 2)  # disjoint halves: independent samples
        rejections += stats.ks_2samp(a, b).pvalue < 0.05
    assert rejections <= 4


def test_difference_quotients_are_cauchy(params):
    xis = [_xi(amp=a, width=w) for a, w in ((0.2, 0.6), (0.4, 0.9), (0.6, 0.7))]
    hs = (0.08, 0.04, 0.02, 0.01)
    gaps = []
    for h0, h1 in zip(hs, hs[1:]):
        gaps.append(max(abs(noise_difference_quotient(1.2, params, 0.7, h0, x) - noise_difference_quotient(1.2, params, 0.7, h1, x)) for x in xis))
    assert all(g1 < 0.7 * g0 for g0, g1 in zip(gaps, gaps[1:]))
