"""Laplace and characteristic functionals of the grey measure, and transforms built on them.

For a test function φ (complex, paired bilinearly):

    Laplace functional         ℓ(φ) = Γ(ρ, θ - ½⟨φ,φ⟩) / Γ(ρ, θ)
    characteristic functional  C(φ) = Γ(ρ, θ + ½⟨φ,φ⟩) / Γ(ρ, θ)
    T-transform of e^{is⟨·,η⟩} at ξ:  Γ(ρ, θ + S(s; η, ξ)) / Γ(ρ, θ)

S-transforms of linear functionals come from differentiating ℓ with the
chain rule and dΓ(ρ, λ)/dλ = -e^{-λ} λ^{ρ-1}.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import DomainError
from .mixing import mixture_integral, sample_R
from .pairing import ComplexTestFunction, GridFunction, QuadraticFamily, bilinear, bilinear_self, in_U_theta, norm_sq
from .quad import McEstimate, summarize
from .specfun import upper_incomplete_gamma


def _tf(phi):
    return phi if isinstance(phi, ComplexTestFunction) else ComplexTestFunction.real(phi)


def _ratio(p, arg):
    arg = complex(arg)
    if arg.imag == 0.0:
        return complex(upper_incomplete_gamma(p.rho, arg.real) / p.gamma_theta())
    return upper_incomplete_gamma(p.rho, arg) / p.gamma_theta()


def laplace_functional(p, phi):
    """ℓ(φ) = Γ(ρ, θ - ½⟨φ,φ⟩)/Γ(ρ, θ) for φ in U_θ.

    Raises
    ------
    DomainError
        φ outside U_θ.
    """
    phi = _tf(phi)
    if not in_U_theta(phi, p.theta):
        raise DomainError("laplace_functional: phi is not in U_theta")
    return _ratio(p, p.theta - 0.5 * bilinear_self(phi))


def char_functional(p, phi):
    """C(φ) = Γ(ρ, θ + ½⟨φ,φ⟩)/Γ(ρ, θ); needs re(θ + ½⟨φ,φ⟩) > 0."""
    phi = _tf(phi)
    arg = p.theta + 0.5 * bilinear_self(phi)
    if arg.real <= 0.0:
        raise DomainError("char_functional: re(theta + <phi,phi>/2) must be positive")
    return _ratio(p, arg)


def t_transform_exp(p, s, eta, xi):
    """T-transform of e^{is⟨·,η⟩} at ξ ∈ U_θ: Γ(ρ, θ + S(s; η, ξ))/Γ(ρ, θ)."""
    xi = _tf(xi)
    if not in_U_theta(xi, p.theta):
        raise DomainError("t_transform_exp: xi is not in U_theta")
    return _ratio(p, p.theta + QuadraticFamily(eta, xi)(s))


def bernstein_mixture(p, S):
    """Quadrature side of Γ(ρ, θ+S)/Γ(ρ, θ) = ∫_1^∞ e^{-rS} f_{ρ,θ}(r) dr.

    Needs re(θ + S) > 0 for absolute convergence.
    """
    S = complex(S)
    if p.theta + S.real <= 0.0:
        raise DomainError("bernstein_mixture: re(theta + S) must be positive")
    if S.imag == 0.0:
        return complex(mixture_integral(p, lambda r: math.exp(-r * S.real)))
    return complex(mixture_integral(p, lambda r: cmath.exp(-r * S), is_complex=True))


def mc_char_functional(p, phi, n_samples, seed):
    """Monte Carlo estimate of C(φ) for real φ: mean of exp(i √(R⟨φ,φ⟩) Z).

    R comes from stream 0 of ``seed`` and Z ~ N(0, 1) from stream 1.
    """
    n = int(n_samples)
    if n < 100:
        raise DomainError("mc_char_functional needs n_samples >= 100")
    if isinstance(phi, ComplexTestFunction):
        if not phi.is_real:
            raise DomainError("mc_char_functional needs a real test function")
        phi = phi.xi1
    q = norm_sq(phi)
    if q == 0.0:
        return McEstimate(1.0 + 0.0j, 0.0, n)
    R = sample_R(p, n, seed=seed).values
    Z = _rng.stream(seed, _rng.STREAM_GAUSS).standard_normal(n)
    return summarize(np.exp(1j * np.sqrt(R * q) * Z))


def s_transform_prefactor(p, xi):
    """e^{-λ} λ^{ρ-1} / Γ(ρ, λ) with λ = θ - ½⟨ξ,ξ⟩.

    This is the factor multiplying ⟨ξ, k⟩ in the S-transform of ⟨·, k⟩; it
    equals 1 at ρ = 1 and E[R] at ξ = 0.
    """
    lam = p.theta - 0.5 * bilinear_self(_tf(xi))
    if lam.imag == 0.0:
        lr = lam.real
        return complex(math.exp(-lr) * lr ** (p.rho - 1.0) / upper_incomplete_gamma(p.rho, lr))
    return cmath.exp(-lam) * lam ** (p.rho - 1.0) / upper_incomplete_gamma(p.rho, lam)


def s_transform_linear(p, kernel, xi):
    """S-transform of the linear functional ⟨·, kernel⟩ at ξ ∈ U_{θ/2}.

    Equals ℓ(ξ)^{-1} d/ds ℓ(ξ + s·kernel) at s = 0, i.e.
    e^{-λ} λ^{ρ-1} ⟨ξ, kernel⟩ / Γ(ρ, λ) with λ = θ - ½⟨ξ,ξ⟩.
    """
    xi = _tf(xi)
    if not in_U_theta(xi, p.theta / 2.0):
        raise DomainError("s_transform_linear: xi is not in U_{theta/2}")
    return s_transform_prefactor(p, xi) * bilinear(xi, kernel)


def s_transform_linear_fd(p, kernel, xi, step=1e-5):
    """Central finite difference of log ℓ along ``kernel``; an oracle for :func:`s_transform_linear`."""
    xi = _tf(xi)
    up = laplace_functional(p, xi.shift(step, kernel))
    dn = laplace_functional(p, xi.shift(-step, kernel))
    return (up - dn) / (2.0 * step * laplace_functional(p, xi))


def t_transform_at_zero(transform, like):
    """Evaluate a T-transform at ξ = 0, which is the expectation of the functional.

    ``transform`` is any callable of a :class:`ComplexTestFunction`; ``like``
    supplies the grid.
    """
    grid = like.grid if isinstance(like, ComplexTestFunction) else like
    return transform(ComplexTestFunction.real(GridFunction.zeros_like(grid)))


@dataclass(frozen=True)
class GreyNoiseSample:
    """Realisations of the pairings ⟨ω, f_i⟩ for a finite family of kernels f_i.

    ``pairings()[m, i] = √R_m (gram_root @ gaussians[m])_i``.
    """

    R: np.ndarray
    gaussians: np.ndarray
    gram_root: np.ndarray

    def pairings(self):
        return np.sqrt(self.R)[:, None] * (self.gaussians @ self.gram_root.T)


def sample_grey_noise(p, gram_root, n, seed):
    """Draw ``n`` joint realisations of ⟨ω, f_i⟩ given a factor of the kernels' Gram matrix."""
    R = sample_R(p, n, seed=seed).values
    Z = _rng.stream(seed, _rng.STREAM_GAUSS).standard_normal((n, gram_root.shape[0]))
    return GreyNoiseSample(R, Z, gram_root)
