"""Quadrature and Monte Carlo oracles.

These routines are built on QUADPACK (via :func:`scipy.integrate.quad`) and
never on the double-exponential kernels used by the closed forms, so a closed
form checked against one of these oracles is checked against an independent
approximation.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import rng as _rng
from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances for :func:`integrate_singular`.

    ``singularity_exponent`` is the default exponent ``e`` of the
    ``(r - lower)^{-e}`` endpoint factor.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_refinements: int = 200
    singularity_exponent: float = 0.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if not 0.0 <= self.singularity_exponent < 1.0:
            raise DomainError("singularity_exponent must lie in [0, 1)")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float

    def __iter__(self):
        return iter((self.value, self.error))


DEFAULT_SPEC = QuadSpec()


def _quad(g, a, b, spec, is_complex):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        if is_complex:
            val, err = integrate.quad(
                g, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_refinements, complex_func=True
            )
            err = math.hypot(complex(err).real, complex(err).imag)
        else:
            val, err = integrate.quad(g, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_refinements)
    warned = any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    return val, err, warned


def _infinite_tail(g, spec, is_complex, max_chunks=60):
    """∫_1^∞ g over chunks [2^k, 2^{k+1}], stopping after two negligible chunks.

    Finite chunks keep oscillatory, slowly decaying integrands away from
    QUADPACK's infinite-interval map, which squeezes the oscillations
    against an endpoint. Whatever lies past the last chunk is added by that
    map anyway.
    """
    total, err_total, warned_any = 0.0, 0.0, False
    quiet = 0
    a = 1.0
    for _ in range(max_chunks):
        val, err, warned = _quad(g, a, 2.0 * a, spec, is_complex)
        total += val
        err_total += err
        warned_any |= warned
        a *= 2.0
        small = abs(val) + err <= 0.1 * max(spec.abs_tol, spec.rel_tol * abs(total))
        quiet = quiet + 1 if small else 0
        if quiet == 2:
            return total, err_total, warned_any
    val, err, warned = _quad(g, a, math.inf, spec, is_complex)
    return total + val, err_total + err, warned_any or warned


def integrate_singular(f, lower=1.0, exponent=None, upper=math.inf, spec=DEFAULT_SPEC, is_complex=False):
    """∫_lower^upper f(r) (r - lower)^{-exponent} dr for smooth ``f``.

    The substitution ``r = lower + v^p`` with ``p = 1/(1 - exponent)`` turns
    the integrand into ``p f(lower + v^p)``, which is bounded at ``v = 0``.
    The transformed integral is split at ``v = 1`` and handed to adaptive
    Gauss-Kronrod quadrature; an infinite tail is taken in doubling chunks.

    Parameters
    ----------
    f : callable
        Regular part of the integrand, scalar in and scalar out.
    exponent : float, optional
        Strength of the endpoint singularity, in [0, 1). Defaults to
        ``spec.singularity_exponent``.
    is_complex : bool
        Set when ``f`` returns complex values.

    Returns
    -------
    QuadResult
        ``(value, error)``, unpackable as a tuple.

    Raises
    ------
    ConvergenceError
        The reported error exceeds the requested tolerance by more than 100x.
    """
    e = spec.singularity_exponent if exponent is None else float(exponent)
    if not 0.0 <= e < 1.0:
        raise DomainError(f"exponent must lie in [0, 1), got {e}")
    if not upper > lower:
        raise DomainError("upper must exceed lower")
    p = 1.0 / (1.0 - e)

    def g(v):
        return p * f(lower + v**p)

    v_hi = math.inf if math.isinf(upper) else (upper - lower) ** (1.0 / p)
    total, err_total, warned_any = _quad(g, 0.0, min(1.0, v_hi), spec, is_complex)
    if math.isinf(v_hi):
        val, err, warned = _infinite_tail(g, spec, is_complex)
    elif v_hi > 1.0:
        val, err, warned = _quad(g, 1.0, v_hi, spec, is_complex)
    else:
        val, err, warned = 0.0, 0.0, False
    total += val
    err_total += err
    warned_any |= warned
    target = max(spec.abs_tol, spec.rel_tol * abs(total))
    if warned_any and err_total > 100.0 * target:
        raise ConvergenceError(f"integrate_singular: error estimate {err_total:.3g} above tolerance {target:.3g}")
    return QuadResult(total, err_total)


@dataclass(frozen=True)
class McEstimate:
    mean: complex
    stderr: float
    n: int

    def __iter__(self):
        return iter((self.mean, self.stderr))

    def within(self, target, n_sigma=4.0):
        """``|mean - target| <= n_sigma * stderr`` (exact match when stderr is 0)."""
        return abs(self.mean - target) <= n_sigma * self.stderr + 1e-15 * max(1.0, abs(target))


def mc_mean(sampler, n, seed, stream=_rng.STREAM_AUX):
    """Sample mean and standard error of ``sampler(rng, n)``.

    ``sampler`` receives a numpy ``Generator`` and the sample count and must
    return ``n`` real or complex values. The standard error is the sample
    standard deviation over sqrt(n).
    """
    n = int(n)
    if n < 100:
        raise DomainError("mc_mean needs n >= 100")
    values = np.asarray(sampler(_rng.stream(seed, stream), n))
    if values.shape != (n,):
        raise DomainError(f"sampler returned shape {values.shape}, expected ({n},)")
    return summarize(values)


def summarize(values):
    """:class:`McEstimate` of an already drawn sample."""
    values = np.asarray(values)
    n = values.size
    if n < 2:
        raise DomainError("need at least two values")
    mean = values.mean()
    mean = complex(mean) if np.iscomplexobj(values) else float(mean)
    return McEstimate(mean, float(np.std(values, ddof=1) / math.sqrt(n)), n)
