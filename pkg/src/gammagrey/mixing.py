"""The mixing density f_{ρ,θ} of the variance variable R and its sampler.

    f_{ρ,θ}(x) = e^{-θx} / (Γ(1-ρ) Γ(ρ,θ) x (x-1)^ρ),   x > 1,

whose Laplace transform is Γ(ρ, θ+s)/Γ(ρ, θ). At ρ = 1 the law is the point
mass at 1 (Γ(1, θ+s)/Γ(1, θ) = e^{-s}); every routine here honours that
convention except :func:`density_f`, which has no Lebesgue density to return.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import rng as _rng
from .errors import DegenerateDensityError, DomainError
from .quad import DEFAULT_SPEC, integrate_singular
from .specfun import upper_incomplete_gamma


@dataclass(frozen=True)
class GreyParams:
    """Parameters (ρ, θ) of the grey noise measure, 0 < ρ <= 1 and θ > 0."""

    rho: float
    theta: float

    def __post_init__(self):
        if not (0.0 < self.rho <= 1.0):
            raise DomainError(f"rho must lie in (0, 1], got {self.rho}")
        if not (self.theta > 0.0 and math.isfinite(self.theta)):
            raise DomainError(f"theta must be positive and finite, got {self.theta}")

    @property
    def is_point_mass(self):
        """True at ρ = 1, where R ≡ 1 and everything reduces to white noise."""
        return self.rho == 1.0

    def gamma_theta(self):
        """Γ(ρ, θ)."""
        return upper_incomplete_gamma(self.rho, self.theta)


@dataclass(frozen=True)
class MixingSample:
    """Draws of R together with their seed and the sampler's acceptance rate."""

    values: np.ndarray
    seed: int
    acceptance_rate: float


def _normaliser(p):
    return math.gamma(1.0 - p.rho) * p.gamma_theta()


def density_f(p, x):
    """Mixing density f_{ρ,θ}(x); zero for x <= 1.

    Raises
    ------
    DegenerateDensityError
        At ρ = 1, where R is the point mass at 1.
    """
    if p.is_point_mass:
        raise DegenerateDensityError("at rho = 1 the mixing law is the point mass R = 1 and has no density")
    x = np.asarray(x, dtype=float)
    inside = x > 1.0
    xs = np.where(inside, x, 2.0)
    val = np.exp(-p.theta * xs - p.rho * np.log(xs - 1.0)) / (_normaliser(p) * xs)
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def mixture_integral(p, g, is_complex=False, spec=DEFAULT_SPEC):
    """Oracle for E[g(R)] = ∫_1^∞ g(r) f_{ρ,θ}(r) dr by adaptive quadrature.

    The (r-1)^{-ρ} endpoint factor is removed by substitution. At ρ = 1 the
    point-mass convention gives g(1).
    """
    if p.is_point_mass:
        return g(1.0)
    scale = 1.0 / (math.gamma(1.0 - p.rho) * p.gamma_theta() * math.exp(p.theta))

    def regular(r):
        return g(r) * math.exp(-p.theta * (r - 1.0)) / r * scale

    return integrate_singular(regular, 1.0, p.rho, spec=spec, is_complex=is_complex).value


def laplace_of_density(p, s):
    """∫_1^∞ e^{-sx} f_{ρ,θ}(x) dx by quadrature (the closed form is the oracle)."""
    if s < 0:
        raise DomainError("laplace_of_density needs s >= 0")
    return mixture_integral(p, lambda r: math.exp(-s * r))


def mean_R(p):
    """E[R] = e^{-θ} θ^{ρ-1} / Γ(ρ, θ)."""
    return math.exp(-p.theta) * p.theta ** (p.rho - 1.0) / p.gamma_theta()


def second_moment_R(p):
    """E[R²] = e^{-θ} θ^{ρ-1} (1 + (1-ρ)/θ) / Γ(ρ, θ)."""
    return mean_R(p) * (1.0 + (1.0 - p.rho) / p.theta)


def acceptance_probability(p):
    """Exact acceptance rate of :func:`sample_R`, E[1/(1+U)] = 1/E[R]."""
    return 1.0 / mean_R(p)


def sample_R(p, n, seed=None, rng=None):
    """Exact draws of R by rejection from a gamma envelope.

    With x = 1 + u the target is proportional to e^{-θu} u^{-ρ} (1+u)^{-1}.
    Propose u ~ Gamma(shape 1-ρ, rate θ) and accept with probability 1/(1+u).
    Proposals that underflow to u = 0 are rejected so that every draw is > 1.

    Parameters
    ----------
    p : GreyParams
    n : int
        Number of draws, >= 1.
    seed : int, optional
        Seed for the R stream; required unless ``rng`` is given.
    rng : numpy.random.Generator, optional
        Explicit generator (overrides ``seed``).

    Returns
    -------
    MixingSample
    """
    n = int(n)
    if n < 1:
        raise DomainError("sample_R needs n >= 1")
    if rng is None:
        rng = _rng.stream(seed, _rng.STREAM_R)
    if p.is_point_mass:
        return MixingSample(np.ones(n), seed, 1.0)
    shape = 1.0 - p.rho
    scale = 1.0 / p.theta
    accept_est = acceptance_probability(p)
    chunks = []
    have = 0
    proposed = 0
    while have < n:
        m = int((n - have) / accept_est * 1.1) + 16
        u = rng.gamma(shape, scale, size=m)
        keep = (rng.random(m) * (1.0 + u) < 1.0) & (u > 0.0)
        proposed += m
        acc = 1.0 + u[keep]
        chunks.append(acc)
        have += acc.size
    values = np.concatenate(chunks)
    # rate over the proposals that produced the retained draws
    used = values[:n]
    return MixingSample(used, seed, have / proposed)


def cdf_R(p, x):
    """P(R <= x) by segmented quadrature of the density; vectorised over ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if p.is_point_mass:
        return np.where(x >= 1.0, 1.0, 0.0)
    order = np.argsort(x)
    xs = x[order]
    out = np.zeros_like(xs)
    scale = 1.0 / (math.gamma(1.0 - p.rho) * p.gamma_theta() * math.exp(p.theta))

    def regular(r):
        return math.exp(-p.theta * (r - 1.0)) / r * scale

    acc = 0.0
    prev = 1.0
    for i, xi in enumerate(xs):
        if xi <= 1.0:
            continue
        if prev == 1.0:
            acc += integrate_singular(regular, 1.0, p.rho, upper=xi).value
        elif xi > prev:
            acc += integrate_singular(lambda r: regular(r) * (r - 1.0) ** (-p.rho), prev, 0.0, upper=xi).value
        prev = xi
        out[i] = acc
    res = np.empty_like(out)
    res[order] = np.minimum(out, 1.0)
    return res


def cdf_interpolant(p, n_nodes=600):
    """Monotone interpolant of the CDF of R for bulk evaluation (e.g. KS tests).

    Nodes are placed in v = (x-1)^{1-ρ}, in which the CDF is smooth and
    nearly linear at the left end; the right end is 1 + 45/θ, beyond which the
    tail is below 1e-19 relative.
    """
    if p.is_point_mass:
        return lambda x: np.where(np.asarray(x) >= 1.0, 1.0, 0.0)
    e = 1.0 - p.rho
    u_max = 45.0 / p.theta
    u_nodes = np.concatenate(([0.0], np.geomspace(1e-10 * u_max, u_max, n_nodes)))
    vals = np.concatenate(([0.0], cdf_R(p, 1.0 + u_nodes[1:])))
    interp = PchipInterpolator(u_nodes**e, vals)

    def cdf(x):
        u = np.clip(np.asarray(x, dtype=float) - 1.0, 0.0, u_max)
        return np.clip(interp(u**e), 0.0, 1.0)

    return cdf
