"""Bounds on the incomplete gamma function off the real axis.

For re z > 0 and ρ in (0, 1),

    |Γ(ρ, z)| < Γ(ρ, re z) / cos(arg z)^ρ,

and along the family z(s) = θ + S(s; η, ξ) the factor cos(arg z)^{-ρ} is
bounded by a constant C_ρ, since arg z(s) → 0 as |s| → ∞. These yield the
absolute integrability in s of the T-transform of e^{is⟨·,η⟩}.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .pairing import QuadraticFamily, in_U_theta, norm_sq
from .quad import integrate_singular
from .specfun import upper_incomplete_gamma


@dataclass(frozen=True)
class BoundReport:
    """|Γ(ρ,z)| against the bound. ``real_axis`` marks the equality case arg z = 0."""

    z: complex
    lhs: float
    rhs: float
    margin: float
    real_axis: bool = False


def _gamma_real(rho, x):
    """Γ(ρ, x) for real x > 0 via the regularised incomplete gamma (independent route)."""
    return float(special.gammaincc(rho, x) * special.gamma(rho))


def appendix_bound(rho, z):
    """Compare |Γ(ρ, z)| with Γ(ρ, re z)/cos(arg z)^ρ.

    The left side uses the ray quadrature of :mod:`gammagrey.specfun`; the
    right side uses scipy's regularised incomplete gamma. On the real axis
    the two sides coincide and the report says so.
    """
    z = complex(z)
    if not 0.0 < rho < 1.0:
        raise DomainError("rho must lie in (0, 1)")
    if z.real <= 0.0:
        raise DomainError("need re(z) > 0")
    if z.imag == 0.0:
        v = upper_incomplete_gamma(rho, z.real)
        return BoundReport(z, v, v, 0.0, True)
    lhs = abs(upper_incomplete_gamma(rho, z))
    phi = math.atan2(z.imag, z.real)
    rhs = _gamma_real(rho, z.real) / math.cos(phi) ** rho
    return BoundReport(z, lhs, rhs, rhs - lhs, False)


@dataclass(frozen=True)
class UniformConstant:
    """C_ρ = cos(M)^{-ρ} with M the sup of |arg(θ + S(s))| attained at ``s_star``."""

    C: float
    M: float
    s_star: float

    def __float__(self):
        return self.C


def uniform_C_rho(rho, theta, eta, xi, s_max=100.0, n_grid=20001, report=False):
    """sup over s of cos(arg(θ + S(s; η, ξ)))^{-ρ}.

    The sup of |arg| is located on a grid over [-s_max, s_max] and polished
    by a bounded scalar maximisation; the grid ends are checked to lie
    above the far-field values at ±100 s_max (arg → 0 as |s| → ∞).

    Raises
    ------
    DomainError
        ξ not in U_θ, or the sup reaches π/2.
    """
    if not in_U_theta(xi, theta):
        raise DomainError("xi is not in U_theta")
    fam = QuadraticFamily(eta, xi)
    s = np.linspace(-s_max, s_max, n_grid)
    args = np.abs(np.angle(theta + fam(s)))
    i = int(np.argmax(args))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, n_grid - 1)]
    res = optimize.minimize_scalar(
        lambda x: -abs(np.angle(theta + fam(x))), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    M, s_star = (-res.fun, res.x) if -res.fun > args[i] else (args[i], s[i])
    far = max(abs(np.angle(theta + fam(100.0 * s_max))), abs(np.angle(theta + fam(-100.0 * s_max))))
    if far > M:
        raise DomainError("arg(theta + S) does not decay on the search range; widen s_max")
    if M >= 0.5 * math.pi:
        raise DomainError("sup |arg(theta + S)| reaches pi/2; xi violates U_theta")
    C = math.cos(M) ** (-rho)
    out = UniformConstant(C, float(M), float(s_star))
    return out if report else C


def bound_chain(p, eta, xi, s):
    """Pointwise |Γ(ρ, θ+S(s))| and C_ρ Γ(ρ, θ + re S(s)) on the points ``s``."""
    C = uniform_C_rho(p.rho, p.theta, eta, xi)
    z = p.theta + QuadraticFamily(eta, xi)(np.asarray(s, dtype=float))
    z = np.atleast_1d(z)
    lhs = np.abs(upper_incomplete_gamma(p.rho, z))
    rhs = C * np.array([_gamma_real(p.rho, x) for x in z.real])
    return lhs, rhs


def chain_holds(lhs, rhs, rtol=1e-12, floor=1e-300):
    """Elementwise lhs <= rhs up to rounding; ``floor`` absorbs subnormal underflow far out in s."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return lhs <= rhs * (1.0 + rtol) + floor


def integrability_bound(p, eta, xi):
    """Upper bound on ∫_ℝ |T(e^{is⟨·,η⟩})(ξ)| ds:

        √(2π) C_ρ / (Γ(ρ,θ) √⟨η,η⟩) ∫_1^∞ e^{-θr/2} r^{-1} (r-1)^{-ρ} dr.
    """
    C = uniform_C_rho(p.rho, p.theta, eta, xi)
    integral = integrate_singular(lambda r: math.exp(-0.5 * p.theta * r) / r, 1.0, p.rho).value
    return math.sqrt(2.0 * math.pi) * C / (p.gamma_theta() * math.sqrt(norm_sq(eta))) * integral
