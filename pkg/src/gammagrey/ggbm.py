"""Γ-grey Brownian motion B(t) = ⟨ω, k_t⟩ and its noise.

Simulation uses subordination: B = √R · G with G a centred Gaussian vector
whose covariance is the Gram matrix of the kernels k_t (fractional Brownian
covariance under the chosen K_α). S-transforms use the chain-rule prefactor
of :func:`gammagrey.functionals.s_transform_prefactor`.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError
from .fracops import FractionalOrder, gram, gram_root, m_plus_apply, normalization_K, pair_with_indicator_kernel
from .functionals import _tf, s_transform_prefactor, sample_grey_noise
from .pairing import in_U_theta, norm_sq
from .specfun import upper_incomplete_gamma


@dataclass(frozen=True, eq=False)
class PathSample:
    """Simulated paths: ``paths[m, i]`` is path ``m`` at ``times[i]``."""

    times: np.ndarray
    paths: np.ndarray
    alpha: float
    params: object
    seed: int
    R: np.ndarray = None
    extra: dict = field(default_factory=dict)

    @property
    def n_paths(self):
        return self.paths.shape[0]


def _check_paths(n_paths):
    if int(n_paths) != n_paths or n_paths < 1:
        raise DomainError("n_paths must be a positive integer")
    return int(n_paths)


def simulate_ggbm(alpha, p, times, n_paths, seed):
    """Simulate ``n_paths`` paths of B at ``times`` (positive, increasing).

    R comes from stream 0 of ``seed``, the Gaussian vectors from stream 1.
    """
    n_paths = _check_paths(n_paths)
    order = FractionalOrder(float(alpha))
    times = np.asarray(times, dtype=float)
    L = gram_root(gram(order, times))
    noise = sample_grey_noise(p, L, n_paths, seed)
    return PathSample(
        times,
        noise.pairings(),
        order.alpha,
        p,
        seed,
        R=noise.R,
        extra={"K_alpha": normalization_K(order)},
    )


def char_fn_ggbm(alpha, p, t, w):
    """E[e^{iwB(t)}] = Γ(ρ, θ + w² t^α / 2) / Γ(ρ, θ)."""
    if not t > 0:
        raise DomainError("t must be positive")
    return upper_incomplete_gamma(p.rho, p.theta + 0.5 * w * w * t**alpha) / p.gamma_theta()


def _s_domain(p, xi):
    xi = _tf(xi)
    if not in_U_theta(xi, p.theta / 2.0):
        raise DomainError("xi is not in U_{theta/2}")
    return xi


def s_transform_ggbm(alpha, p, t, xi, route="direct"):
    """S-transform of B(t) at ξ ∈ U_{θ/2}: prefactor(ξ) · ⟨ξ, k_t⟩.

    ``route="direct"`` pairs ξ with the exact kernel by quadrature;
    ``route="duality"`` uses ⟨ξ, k_t⟩ = ∫_0^t (M₊^{α/2} ξ)(x) dx on the grid.
    """
    xi = _s_domain(p, xi)
    if route == "direct":
        pairing = pair_with_indicator_kernel(alpha, xi, t)
    elif route == "duality":
        mp = m_plus_apply(alpha, xi)
        x = mp.grid.x
        pairing = complex(
            CubicSpline(x, mp.xi1.values).integrate(0.0, t), CubicSpline(x, mp.xi2.values).integrate(0.0, t)
        )
    else:
        raise ValueError(f"unknown route {route!r}")
    return s_transform_prefactor(p, xi) * pairing


def noise_s_transform(alpha, p, t, xi):
    """S-transform of the noise N_t at ξ: prefactor(ξ) · (M₊^{α/2} ξ)(t)."""
    xi = _s_domain(p, xi)
    g = xi.grid
    if not g.lo < t < g.hi:
        raise DomainError("t must be interior to the grid")
    mp = m_plus_apply(alpha, xi)
    val = complex(float(CubicSpline(g.x, mp.xi1.values)(t)), float(CubicSpline(g.x, mp.xi2.values)(t)))
    return s_transform_prefactor(p, xi) * val


def noise_difference_quotient(alpha, p, t, h, xi, route="direct"):
    """[S(B_{t+h}) - S(B_t)](ξ) / h, the S-transform of the noise approximant."""
    return (s_transform_ggbm(alpha, p, t + h, xi, route) - s_transform_ggbm(alpha, p, t, xi, route)) / h


def m_plus_sup(alpha, xi):
    """max over the grid of |M₊^{α/2} ξ| (complex ξ: modulus of the complex value)."""
    mp = m_plus_apply(alpha, _tf(xi))
    return float(np.max(np.abs(mp.values())))


def literal_noise_prefactor(p, xi):
    """The prefactor as displayed in the source derivation, kept for comparison only.

        -Γ(ρ,θ)/Γ(ρ, θ - ½‖ξ‖²) · e^{-θ-‖ξ‖²} (θ + ½‖ξ‖²)^{ρ-1}

    for real ξ. It differs from :func:`gammagrey.functionals.s_transform_prefactor`
    by a factor Γ(ρ,θ), the sign, and the exponent/argument conventions.
    """
    q = norm_sq(_tf(xi).xi1)
    return (
        -p.gamma_theta()
        / upper_incomplete_gamma(p.rho, p.theta - 0.5 * q)
        * math.exp(-p.theta - q)
        * (p.theta + 0.5 * q) ** (p.rho - 1.0)
    )


def literal_noise_bound(p, alpha, xi):
    """e^{-θ} θ^{ρ-1} max|M₊^{α/2} ξ|, the uniform bound as stated."""
    return math.exp(-p.theta) * p.theta ** (p.rho - 1.0) * m_plus_sup(alpha, xi)


def consistent_noise_bound(p, alpha, xi):
    """(1 + 2(1-ρ)/θ) max|M₊^{α/2} ξ| for real ξ ∈ U_θ.

    For λ = θ - ½‖ξ‖² ∈ (θ/2, θ] the chain-rule prefactor e^{-λ}λ^{ρ-1}/Γ(ρ,λ)
    is below 1 + (1-ρ)/λ, by Γ(ρ,x) > x^ρ e^{-x} / (x + 1 - ρ).
    """
    return (1.0 + 2.0 * (1.0 - p.rho) / p.theta) * m_plus_sup(alpha, xi)
