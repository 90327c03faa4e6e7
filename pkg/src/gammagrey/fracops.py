"""Fractional operators M±^{α/2} on indicators and on grid functions.

With β = (α-1)/2 the image of the indicator of [0, t) under M₋^{α/2} is

    k_t(u) = K_α [(t-u)₊^β - (-u)₊^β],

the Riemann-Liouville integral (α > 1) or derivative (α < 1) of the
indicator, and the indicator itself at α = 1. The constant K_α is fixed by
‖k_1‖ = 1, which makes ‖k_t‖² = t^α and turns ⟨k_t, k_s⟩ into the
fractional Brownian covariance.

Kernel inner products ⟨k_t, k_s⟩ are computed by double-exponential
quadrature (:mod:`gammagrey._kernels`). Near α = 2 the kernels' slow decay
makes these integrals converge poorly; α up to about 1.95 is supported.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.special import gamma as gamma_fn

from . import _kernels
from .errors import ConvergenceError, DomainError
from .pairing import ComplexTestFunction, GridFunction

BOUNDARY_DECAY = 1e-6
GRAM_NEG_TOL = 1e-10


@dataclass(frozen=True)
class FractionalOrder:
    """Order α in (0, 2); α = 1 is the identity regime."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")

    @property
    def beta(self):
        return 0.5 * (self.alpha - 1.0)

    @property
    def is_identity(self):
        return self.alpha == 1.0


def _order(alpha):
    return alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))


@lru_cache(maxsize=64)
def _normalization(alpha):
    if alpha == 1.0:
        return 1.0
    beta = 0.5 * (alpha - 1.0)
    val, ok = _kernels.pair_kernel(beta, np.array([1.0]), np.array([1.0]))
    if not ok[0]:
        raise ConvergenceError(f"normalization integral for alpha={alpha} did not converge")
    return 1.0 / math.sqrt(val[0])


def normalization_K(alpha):
    """K_α with ∫ [(1-u)₊^β - (-u)₊^β]² du = K_α^{-2}, computed by quadrature and cached."""
    return _normalization(_order(alpha).alpha)


@dataclass(frozen=True)
class IndicatorKernel:
    """k_t = M₋^{α/2} 1_{[0,t)} with normalisation constant ``norm_const``."""

    alpha: FractionalOrder
    t: float
    norm_const: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")

    @classmethod
    def make(cls, alpha, t, norm_const=None):
        order = _order(alpha)
        k = normalization_K(order) if norm_const is None else float(norm_const)
        return cls(order, float(t), k)

    def __call__(self, u):
        return m_minus_indicator(self, u)


def _pos_pow(x, beta):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(x > 0.0, np.abs(x) ** beta, 0.0)
    if beta < 0.0:
        out = np.where(x == 0.0, np.inf, out)
    return out


def m_minus_indicator(k, u):
    """Evaluate k_t(u) = K_α[(t-u)₊^β - (-u)₊^β]; vectorised in ``u``.

    At α = 1 this is the indicator of [0, t). For α < 1 the kernel blows up
    at u = 0 (to -inf) and u = t (to +inf); those points return infinities.
    """
    u = np.asarray(u, dtype=float)
    if k.alpha.is_identity:
        out = ((u >= 0.0) & (u < k.t)).astype(float)
    else:
        b = k.alpha.beta
        with np.errstate(invalid="ignore"):
            out = k.norm_const * (_pos_pow(k.t - u, b) - _pos_pow(-u, b))
    return float(out) if out.ndim == 0 else out


def _quad(f, a, b, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-12, **kw)
    return val, err


def kernel_norm_sq(k):
    """‖k_t‖² by adaptive Gauss-Kronrod quadrature with algebraic endpoint weights.

    Independent of the double-exponential route used by :func:`gram`.
    """
    t = k.t
    if k.alpha.is_identity:
        return t
    b = k.alpha.beta
    inner, _ = _quad(lambda u: 1.0, 0.0, t, weight="alg", wvar=(0.0, 2.0 * b))

    def near(v):  # ((t+v)^b - v^b)^2 / v^{2b}
        return (((t + v) / v) ** b - 1.0) ** 2 if v > 0 else (1.0 if b < 0 else 0.0)

    def far(v):
        return (v**b * math.expm1(b * math.log1p(t / v))) ** 2

    left_near, _ = _quad(near, 0.0, t, weight="alg", wvar=(2.0 * b, 0.0))
    left_far, _ = _quad(far, t, math.inf)
    return k.norm_const**2 * (inner + left_near + left_far)


def _check_decay(xi):
    vals = np.abs(xi.values)
    peak = vals.max()
    if peak > 0 and max(vals[0], vals[-1]) >= BOUNDARY_DECAY * peak:
        raise DomainError("grid function must decay to ~0 at both grid ends (|end| < 1e-6 max)")


def m_plus_apply(alpha, xi):
    """(M₊^{α/2} ξ) on the grid of ``xi``.

    α > 1: K_α Γ(β+1) I₊^β ξ.  α < 1: K_α Γ(β+1) I₊^{β+1} ξ', with ξ' by
    second-order finite differences. The lower Riemann-Liouville integral
    starts at the grid's left end and is evaluated by product integration
    (piecewise-linear ξ against the exact power weight), second order in the
    grid step for smooth ξ.

    Raises
    ------
    DomainError
        ``xi`` does not decay at the grid ends.
    """
    order = _order(alpha)
    if isinstance(xi, ComplexTestFunction):
        return ComplexTestFunction(m_plus_apply(order, xi.xi1), m_plus_apply(order, xi.xi2))
    _check_decay(xi)
    if order.is_identity:
        return xi
    b = order.beta
    scale = normalization_K(order) * math.gamma(b + 1.0)
    h = xi.step
    if b > 0:
        out = _kernels.rl_kernel(xi.values, b, h)
    else:
        out = _kernels.rl_kernel(np.gradient(xi.values, h, edge_order=2), b + 1.0, h)
    return xi.with_values(scale * out)


def pair_with_indicator_kernel(alpha, xi, t):
    """⟨ξ, k_t⟩ by quadrature of a cubic spline of ξ against the exact kernel.

    The power singularities of k_t are absorbed into algebraic quadrature
    weights. Complex ξ returns the bilinear (complex) value.
    """
    order = _order(alpha)
    if isinstance(xi, ComplexTestFunction):
        return complex(pair_with_indicator_kernel(order, xi.xi1, t), pair_with_indicator_kernel(order, xi.xi2, t))
    spline = CubicSpline(xi.x, xi.values)
    lo, hi = xi.lo, xi.hi
    if order.is_identity:
        a, c = max(lo, 0.0), min(hi, t)
        return float(spline.integrate(a, c)) if c > a else 0.0
    b = order.beta
    total = 0.0
    # (0, t): (t-u)^β
    a, c = max(lo, 0.0), min(hi, t)
    if c > a:
        if c == t:
            total += _quad(spline, a, c, weight="alg", wvar=(0.0, b))[0]
        else:
            total += _quad(lambda u: spline(u) * (t - u) ** b, a, c)[0]
    # (lo, 0): (t-u)^β - (-u)^β
    if lo < 0.0:
        c = min(hi, 0.0)
        total += _quad(lambda u: spline(u) * (t - u) ** b, lo, c)[0]
        if c == 0.0:
            total -= _quad(spline, lo, 0.0, weight="alg", wvar=(0.0, b))[0]
        else:
            total -= _quad(lambda u: spline(u) * (-u) ** b, lo, c)[0]
    return normalization_K(order) * total


def duality_pairing_check(alpha, xi, t):
    """Both sides of ⟨ξ, k_t⟩ = ∫_0^t (M₊^{α/2} ξ)(x) dx, each by its own quadrature.

    Returns ``(lhs, rhs)``; ``t`` must lie inside the grid.
    """
    if not xi.lo <= 0.0 < t <= xi.hi:
        raise DomainError("need lo <= 0 < t <= hi")
    lhs = pair_with_indicator_kernel(alpha, xi, t)
    mp = m_plus_apply(alpha, xi)
    rhs = float(CubicSpline(mp.x, mp.values).integrate(0.0, t))
    return lhs, rhs


def _pairs(order, t, s):
    val, ok = _kernels.pair_kernel(order.beta, t, s)
    if not np.all(ok):
        raise ConvergenceError(f"kernel inner products did not converge for alpha={order.alpha}")
    return normalization_K(order) ** 2 * val


def kernel_inner(alpha, t, s):
    """⟨k_t, k_s⟩ by quadrature."""
    order = _order(alpha)
    t, s = max(t, s), min(t, s)
    if order.is_identity:
        return s
    return float(_pairs(order, np.array([t]), np.array([s]))[0])


def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a non-empty 1-d sequence")
    if np.any(times <= 0.0):
        raise DomainError("times must be strictly positive")
    if np.any(np.diff(times) <= 0.0):
        raise DomainError("times must be strictly increasing")
    return times


def gram(alpha, times, method="auto"):
    """Gram matrix G_ij = ⟨k_{t_i}, k_{t_j}⟩ by quadrature.

    ``method="direct"`` integrates every pair. ``"polarized"`` uses
    translation invariance, ‖k_t - k_s‖ = ‖k_{|t-s|}‖, so that
    G_ij = ½(N(t_i) + N(t_j) - N(|t_i - t_j|)) with N(t) = ‖k_t‖² integrated
    once per distinct length. ``"auto"`` picks direct for up to 64 times.

    Raises
    ------
    DomainError
        The matrix has an eigenvalue below -1e-10 × max diagonal.
    """
    order = _order(alpha)
    times = _check_times(times)
    n = times.size
    if method == "auto":
        method = "direct" if n <= 64 else "polarized"
    if order.is_identity:
        G = np.minimum.outer(times, times)
    elif method == "direct":
        i, j = np.triu_indices(n)
        vals = _pairs(order, times[j], times[i])
        G = np.empty((n, n))
        G[i, j] = vals
        G[j, i] = vals
    elif method == "polarized":
        diffs = np.abs(times[:, None] - times[None, :])
        lengths = np.unique(np.concatenate((times, diffs[diffs > 0])))
        norms = _pairs(order, lengths, lengths)
        lookup = dict(zip(lengths.tolist(), norms.tolist()))
        N = np.vectorize(lambda x: lookup.get(x, 0.0))
        G = 0.5 * (N(times)[:, None] + N(times)[None, :] - N(diffs))
    else:
        raise ValueError(f"unknown method {method!r}")
    check_psd(G)
    return G


def check_psd(G):
    lam = np.linalg.eigvalsh(G)
    scale = max(1.0, float(np.max(np.diag(G))))
    if lam[0] < -GRAM_NEG_TOL * scale:
        raise DomainError(f"Gram matrix is indefinite (min eigenvalue {lam[0]:.3g})")
    return lam


def gram_root(G, max_jitter=1e-10):
    """Lower Cholesky factor of ``G``, adding diagonal jitter up to ``max_jitter`` if needed."""
    scale = max(1.0, float(np.max(np.diag(G))))
    for jitter in (0.0, 1e-14, 1e-12, max_jitter):
        try:
            return np.linalg.cholesky(G + jitter * scale * np.eye(G.shape[0]))
        except np.linalg.LinAlgError:
            continue
    raise DomainError(f"Cholesky failed with jitter up to {max_jitter}")


def fbm_covariance(alpha, t, s):
    """½(t^α + s^α - |t-s|^α), the closed form the Gram matrix must reproduce."""
    return 0.5 * (np.power(t, alpha) + np.power(s, alpha) - np.power(np.abs(np.subtract(t, s)), alpha))


def normalization_closed_form(alpha):
    """K_α from ∫ k_1² = Γ(H+½)² / (Γ(2H+1) sin πH), H = α/2; an independent check."""
    H = 0.5 * alpha
    J = gamma_fn(H + 0.5) ** 2 / (gamma_fn(2 * H + 1) * math.sin(math.pi * H))
    return 1.0 / math.sqrt(J)
