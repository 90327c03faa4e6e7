"""Donsker's delta δ(⟨·,η⟩ - a): T-transforms, expectations and mixture oracles.

Under the grey measure, ⟨ω, η⟩ is a variance mixture of centred Gaussians
with variance R‖η‖², so every quantity here has two independent routes:

* a closed form in Tricomi's Ψ (routed through :mod:`gammagrey.specfun`);
* a one-dimensional mixture integral over the density of R (routed through
  :mod:`gammagrey.quad`).

Two conventions for the auxiliary quantity ``k`` coexist and are kept apart
by :class:`DonskerArg.includes_theta`:

* unshifted delta: k = θ + ½(⟨ξ,ξ⟩ - ⟨η,ξ⟩²/⟨η,η⟩);
* shifted delta:   k = ½⟨ξ,ξ⟩ - ⟨ξ,η⟩²/(2⟨η,η⟩), with θ added separately.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, SeriesNotConverged
from .mixing import mixture_integral
from .pairing import ComplexTestFunction, GridFunction, bilinear, bilinear_self, in_U_theta, norm_sq
from .specfun import tricomi_psi

SERIES_RTOL = 1e-14
SERIES_MAX_TERMS = 200


@dataclass(frozen=True)
class DonskerArg:
    """Auxiliary quantities of the delta formulas.

    ``k1 = a²/(2‖η‖²)`` and ``k2`` is the prefactor of the shifted series;
    for the unshifted delta ``k1 = 0`` and ``k2`` is the closed-form prefactor.
    """

    k: complex
    k1: float
    k2: complex
    includes_theta: bool


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    n_terms: int
    tail_bound: float


def _tf(xi, eta):
    if xi is None:
        return ComplexTestFunction.real(GridFunction.zeros_like(eta))
    return xi if isinstance(xi, ComplexTestFunction) else ComplexTestFunction.real(xi)


def _pairings(p, eta, xi):
    xi = _tf(xi, eta)
    eta_sq = norm_sq(eta)
    if eta_sq <= 0.0:
        raise DomainError("eta must be non-zero")
    if not in_U_theta(xi, p.theta):
        raise DomainError("xi is not in U_theta")
    return eta_sq, bilinear_self(xi), bilinear(eta, xi)


def _gamma_theta(p):
    return p.gamma_theta()


def delta_arg(p, eta_sq, xi_xi=0j, eta_xi=0j, a=None):
    """Build :class:`DonskerArg` from the three pairings ‖η‖², ⟨ξ,ξ⟩, ⟨η,ξ⟩."""
    q = 0.5 * (xi_xi - eta_xi**2 / eta_sq)
    norm = math.sqrt(2.0 * math.pi * eta_sq) * _gamma_theta(p)
    if a is None:
        k = p.theta + q
        return DonskerArg(k, 0.0, cmath.exp(-k) / norm, True)
    k2 = cmath.exp(-q - p.theta) * cmath.exp(1j * a * eta_xi / eta_sq) / norm
    return DonskerArg(q, a * a / (2.0 * eta_sq), k2, False)


def _t_delta(p, eta_sq, xi_xi, eta_xi):
    arg = delta_arg(p, eta_sq, xi_xi, eta_xi)
    if arg.k.real <= 0.0:
        raise DomainError("t_transform_delta needs re(k) > 0")
    return arg.k2 * tricomi_psi(1.0 - p.rho, 0.5 - p.rho, arg.k)


def t_transform_delta(p, eta, xi=None):
    """T-transform of δ(⟨·,η⟩) at ξ ∈ U_θ.

        e^{-k} Ψ(1-ρ, ½-ρ; k) / (√(2π⟨η,η⟩) Γ(ρ,θ)),   k = θ + ½(⟨ξ,ξ⟩ - ⟨η,ξ⟩²/⟨η,η⟩).

    At ρ = 1, Ψ(0, ·; ·) = 1 and the Gaussian result is recovered.
    """
    return _t_delta(p, *_pairings(p, eta, xi))


def expectation_delta_norm(p, eta_sq):
    """E[δ(⟨·,η⟩)] given only ‖η‖²."""
    if eta_sq <= 0.0:
        raise DomainError("eta must be non-zero")
    return _t_delta(p, eta_sq, 0j, 0j).real


def expectation_delta(p, eta):
    """E[δ(⟨·,η⟩)] = e^{-θ} Ψ(1-ρ, ½-ρ; θ) / (√(2π⟨η,η⟩) Γ(ρ,θ)); 1/√(2π‖η‖²) at ρ = 1."""
    return expectation_delta_norm(p, norm_sq(eta))


def _series(p, eta_sq, xi_xi, eta_xi, a, rtol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS):
    arg = delta_arg(p, eta_sq, xi_xi, eta_xi, a=a)
    z = arg.k + p.theta
    if z.real <= 0.0:
        raise DomainError("shifted delta needs re(k + theta) > 0")
    A = 1.0 - p.rho
    # |Ψ(A, c - n; z)| <= Ψ(A, c; re z) bounds every term's Ψ factor
    psi_cap = abs(tricomi_psi(A, 0.5 - p.rho, z.real))
    partial = 0j
    coeff = 1.0
    tail = math.inf
    for n in range(max_terms):
        if n:
            coeff *= -arg.k1 / n
        term = coeff * tricomi_psi(A, 0.5 - n - p.rho, z)
        partial += term
        # remaining terms: sum_{m>n} k1^m/m! psi_cap <= k1^{n+1}/(n+1)! e^{k1} psi_cap
        tail = abs(coeff) * arg.k1 / (n + 1) * math.exp(arg.k1) * psi_cap
        scale = abs(partial)
        if abs(term) <= rtol * scale and tail <= rtol * scale:
            return SeriesResult(arg.k2 * partial, n + 1, abs(arg.k2) * tail)
        if tail == 0.0:
            return SeriesResult(arg.k2 * partial, n + 1, 0.0)
    raise SeriesNotConverged(
        f"shifted delta series not converged in {max_terms} terms",
        partial=arg.k2 * partial,
        tail_bound=abs(arg.k2) * tail,
        n_terms=max_terms,
    )


def t_transform_delta_a(p, a, eta, xi=None, rtol=SERIES_RTOL, max_terms=SERIES_MAX_TERMS):
    """T-transform of δ(⟨·,η⟩ - a) at ξ ∈ U_θ by its Ψ series.

        k₂ Σ_n (-k₁)^n / n! Ψ(1-ρ, ½-n-ρ; k+θ),
        k₂ = e^{-k-θ} e^{ia⟨ξ,η⟩/⟨η,η⟩} / (√(2π⟨η,η⟩) Γ(ρ,θ)).

    The sum stops once both the last term and a rigorous bound on the tail
    are below ``rtol`` times the partial sum. The series alternates with
    terms of size up to ~e^{k₁}, so for k₁ much beyond 10 cancellation costs
    digits; the mixture oracle stays accurate there.

    Returns
    -------
    SeriesResult
        ``value``, number of terms used and the tail bound (absolute).

    Raises
    ------
    SeriesNotConverged
        After ``max_terms`` terms; carries the partial sum and tail bound.
    """
    return _series(p, *_pairings(p, eta, xi), float(a), rtol, max_terms)


def expectation_delta_a_norm(p, a, eta_sq):
    """E[δ(⟨·,η⟩ - a)] given only ‖η‖², as a :class:`SeriesResult`."""
    if eta_sq <= 0.0:
        raise DomainError("eta must be non-zero")
    res = _series(p, eta_sq, 0j, 0j, float(a))
    return SeriesResult(res.value.real, res.n_terms, res.tail_bound)


def expectation_delta_a(p, a, eta):
    """E[δ(⟨·,η⟩ - a)]: the series at ξ = 0 (real)."""
    return expectation_delta_a_norm(p, a, norm_sq(eta))


def mixture_delta_oracle(p, a, eta_sq, xi_xi=0j, eta_xi=0j):
    """Mixture-integral value of T(δ_a)(ξ) from pairings.

        e^{ia⟨η,ξ⟩/⟨η,η⟩} ∫_1^∞ (2πr‖η‖²)^{-1/2} e^{-a²/(2r‖η‖²) - r q} f(r) dr,
        q = ½(⟨ξ,ξ⟩ - ⟨η,ξ⟩²/⟨η,η⟩).
    """
    q = complex(0.5 * (xi_xi - eta_xi**2 / eta_sq))
    c = 2.0 * math.pi * eta_sq
    k1 = a * a / (2.0 * eta_sq)
    phase = cmath.exp(1j * a * eta_xi / eta_sq)
    if q.imag == 0.0:
        val = mixture_integral(p, lambda r: math.exp(-k1 / r - r * q.real) / math.sqrt(c * r))
    else:
        val = mixture_integral(p, lambda r: cmath.exp(-k1 / r - r * q) / math.sqrt(c * r), is_complex=True)
    return phase * val


def mixture_density_p(p, eta, x):
    """Density at ``x`` of ⟨ω, η⟩: ∫_1^∞ (2πr‖η‖²)^{-1/2} e^{-x²/(2r‖η‖²)} f(r) dr."""
    eta_sq = float(eta) if isinstance(eta, (int, float)) else norm_sq(eta)
    if eta_sq <= 0.0:
        raise DomainError("eta must be non-zero")
    return mixture_delta_oracle(p, float(x), eta_sq).real
