"""Scalar special functions: upper incomplete gamma, Kummer 1F1, Tricomi Psi, Pochhammer.

Complex scalars are plain Python ``complex`` (numpy ``complex128`` inside
arrays). All functions accept scalars or array-likes; scalar input yields a
scalar, real input to :func:`upper_incomplete_gamma` yields a real result.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, PoleError, SeriesNotConverged

SERIES_MAX_TERMS = 200
SERIES_RTOL = 1e-15
SMALL_Z = 1e-15


@dataclass(frozen=True)
class HypergeometricArgs:
    """Parameters ``(a, c; z)`` of a confluent hypergeometric function."""

    a: float
    c: float
    z: complex

    def __post_init__(self):
        for name in ("a", "c"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not np.isfinite(complex(self.z)):
            raise DomainError("z must be finite")


def _unpack(a, c, z):
    if isinstance(a, HypergeometricArgs):
        return a.a, a.c, a.z
    if c is None or z is None:
        raise TypeError("pass HypergeometricArgs or all of a, c, z")
    return a, c, z


def _as_array(z):
    arr = np.asarray(z)
    return arr, arr.ndim == 0, not np.iscomplexobj(arr)


def _finish(values, scalar, real):
    if real:
        values = values.real
    if scalar:
        v = values.reshape(-1)[0]
        return float(v) if real else complex(v)
    return values


def upper_incomplete_gamma(rho, z, tol=1e-13):
    """Upper incomplete gamma Γ(ρ, z) = ∫_z^∞ t^{ρ-1} e^{-t} dt.

    Evaluated along the horizontal path from ``z`` to ``z + ∞`` with an
    exp-sinh trapezoid rule; for ``|z| < 1e-15`` the two leading terms of
    Γ(ρ) - Σ (-1)^n z^{ρ+n} / (n! (ρ+n)) are exact to rounding.

    Parameters
    ----------
    rho : float
        Order, ``rho > 0``. The grey-noise formulas use ``rho`` in (0, 1];
        larger orders are accepted so that recurrences can be checked.
    z : complex or array_like
        Argument. ``z = 0`` gives Γ(ρ). Real ``z`` must be ``>= 0``;
        non-real ``z`` must have positive real part.
    tol : float
        Relative tolerance between successive step-halving levels.

    Returns
    -------
    float, complex or ndarray
        Real for real input.

    Raises
    ------
    DomainError
        ``rho <= 0``, ``z`` on the negative real axis or ``re z <= 0`` off-axis.
    ConvergenceError
        The quadrature did not settle to ``tol``.
    """
    rho = float(rho)
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho}")
    arr, scalar, real = _as_array(z)
    zc = np.atleast_1d(arr).astype(np.complex128).ravel()
    if not np.all(np.isfinite(zc)):
        raise DomainError("z must be finite")
    on_axis = zc.imag == 0.0
    if np.any(on_axis & (zc.real < 0.0)):
        raise DomainError("upper_incomplete_gamma: z on the negative real axis (branch cut)")
    if np.any(~on_axis & (zc.real <= 0.0)):
        raise DomainError("upper_incomplete_gamma: complex z needs re(z) > 0")
    out = np.empty(zc.shape, np.complex128)
    tiny = np.abs(zc) < SMALL_Z
    zt = zc[tiny]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[tiny] = math.gamma(rho) - np.where(zt == 0.0, 0.0, zt**rho * (1.0 / rho - zt / (rho + 1.0)))
    idx = np.flatnonzero(~tiny)
    if idx.size:
        vals, ok = _kernels.gamma_ray_kernel(rho, zc[idx], tol=tol)
        if not np.all(ok):
            bad = zc[idx][~ok][0]
            raise ConvergenceError(f"upper_incomplete_gamma({rho}, {bad}) did not converge")
        out[idx] = vals
    return _finish(out.reshape(np.shape(arr)), scalar, real)


def incomplete_gamma_ratio(rho, theta, shift):
    """Γ(ρ, θ + shift) / Γ(ρ, θ); the basic building block of every functional."""
    return upper_incomplete_gamma(rho, np.add(theta, shift)) / upper_incomplete_gamma(rho, theta)


def pochhammer(x, k):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1."""
    if k < 0 or int(k) != k:
        raise DomainError("k must be a non-negative integer")
    out = 1.0
    for j in range(int(k)):
        out *= x + j
    return out


def _is_nonpositive_int(c):
    return c <= 0 and float(c).is_integer()


def kummer_1f1(a, c=None, z=None, max_terms=SERIES_MAX_TERMS, rtol=SERIES_RTOL):
    """Kummer's function 1F1(a; c; z) by its power series.

    Stops once ``|term| < rtol * |partial|`` (two consecutive terms, so a
    vanishing coefficient does not end the sum early).

    Raises
    ------
    PoleError
        ``c`` is 0, -1, -2, ...
    SeriesNotConverged
        Tolerance not met within ``max_terms`` terms.
    """
    a, c, z = _unpack(a, c, z)
    if _is_nonpositive_int(c):
        raise PoleError(f"kummer_1f1: c = {c} is a pole")
    z = complex(z)
    term = 1.0 + 0.0j
    total = term
    quiet = 0
    for k in range(max_terms):
        term *= (a + k) / (c + k) * z / (k + 1)
        total += term
        if abs(term) <= rtol * abs(total):
            quiet += 1
            if quiet == 2:
                return total
        else:
            quiet = 0
    raise SeriesNotConverged(
        f"kummer_1f1({a}, {c}, {z}) not converged in {max_terms} terms",
        partial=total,
        tail_bound=abs(term),
        n_terms=max_terms,
    )


def _psi_domain(a, z):
    if a < 0:
        raise DomainError(f"tricomi_psi needs a >= 0, got {a}")
    z = complex(z)
    if z.real <= 0:
        raise DomainError(f"tricomi_psi needs re(z) > 0, got {z}")
    return z


def tricomi_psi(a, c=None, z=None, method="integral", tol=1e-13):
    """Tricomi's confluent hypergeometric function Ψ(a, c; z).

    ``method="integral"`` (default) evaluates

        Ψ(a, c; z) = Γ(a)^{-1} ∫_0^∞ e^{-zu} u^{a-1} (1+u)^{c-a-1} du,

    valid for any real ``c``. ``method="series"`` uses the two-term Kummer
    combination, which has poles at integer ``c`` and serves as a cross-check.
    ``a = 0`` returns 1 exactly.

    Returns a complex number; take ``.real`` for real ``z``.
    """
    a, c, z = _unpack(a, c, z)
    z = _psi_domain(a, z)
    if a == 0:
        return 1.0 + 0.0j
    if method == "integral":
        vals, ok = _kernels.psi_kernel(a, c, np.array([z]), tol=tol)
        if not ok[0]:
            raise ConvergenceError(f"tricomi_psi({a}, {c}, {z}) integral did not converge")
        return complex(vals[0]) / math.gamma(a)
    if method == "series":
        if float(c).is_integer():
            raise PoleError(f"two-term formula is singular at integer c = {c}")
        first = math.gamma(1 - c) / math.gamma(1 + a - c) * kummer_1f1(a, c, z)
        second = math.gamma(c - 1) / math.gamma(a) * z ** (1 - c) * kummer_1f1(1 + a - c, 2 - c, z)
        return first + second
    raise ValueError(f"unknown method {method!r}")


def tricomi_psi_array(a, c, z, tol=1e-13):
    """Vectorised integral-path Ψ(a, c; z) over an array of ``z``."""
    zc = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if a < 0:
        raise DomainError(f"tricomi_psi needs a >= 0, got {a}")
    if np.any(zc.real <= 0):
        raise DomainError("tricomi_psi needs re(z) > 0")
    if a == 0:
        return np.ones(zc.shape, np.complex128)
    vals, ok = _kernels.psi_kernel(a, c, zc.ravel(), tol=tol)
    if not np.all(ok):
        raise ConvergenceError("tricomi_psi integral did not converge")
    return vals.reshape(zc.shape) / math.gamma(a)
