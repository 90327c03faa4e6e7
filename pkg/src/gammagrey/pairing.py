"""Grid test functions and the bilinear L² pairing.

Test functions are sampled on a uniform grid and paired by composite Simpson
quadrature. Complex test functions ξ = ξ₁ + iξ₂ are paired *bilinearly*,

    ⟨ξ, ζ⟩ = ⟨ξ₁, ζ₁⟩ - ⟨ξ₂, ζ₂⟩ + i(⟨ξ₁, ζ₂⟩ + ⟨ξ₂, ζ₁⟩),

never Hermitian-ly. The quadratic form S(s; η, ξ) = ½⟨sη + ξ, sη + ξ⟩ and the
admissibility ball U_θ live here too.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, GridMismatchError


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function sampled at ``n`` uniformly spaced points of [lo, hi]."""

    lo: float
    hi: float
    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if not self.lo < self.hi:
            raise DomainError("GridFunction needs lo < hi")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("GridFunction needs n >= 2")
        if vals.shape != (self.n,):
            raise DomainError(f"expected {self.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("GridFunction values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, f, lo, hi, n):
        x = np.linspace(lo, hi, n)
        return cls(lo, hi, n, np.asarray(f(x), dtype=float) * np.ones(n))

    @classmethod
    def zeros_like(cls, other):
        return cls(other.lo, other.hi, other.n, np.zeros(other.n))

    @property
    def step(self):
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def x(self):
        return np.linspace(self.lo, self.hi, self.n)

    def same_grid(self, other):
        return self.lo == other.lo and self.hi == other.hi and self.n == other.n

    def _check(self, other):
        if not self.same_grid(other):
            raise GridMismatchError(
                f"grids differ: [{self.lo}, {self.hi}]/{self.n} vs [{other.lo}, {other.hi}]/{other.n}"
            )

    def with_values(self, values):
        return GridFunction(self.lo, self.hi, self.n, values)

    def __add__(self, other):
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        return self.with_values(float(c) * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def to_json(self):
        return json.dumps({"lo": self.lo, "hi": self.hi, "n": self.n, "values": self.values.tolist()})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["lo"], d["hi"], d["n"], np.array(d["values"], dtype=float))


def inner(f, g):
    """Simpson approximation of ∫ f g over the common grid."""
    f._check(g)
    return float(simpson(f.values * g.values, dx=f.step))


def norm_sq(f):
    return inner(f, f)


@dataclass(frozen=True, eq=False)
class ComplexTestFunction:
    """ξ = ξ₁ + iξ₂ with both parts on the same grid."""

    xi1: GridFunction
    xi2: GridFunction

    def __post_init__(self):
        self.xi1._check(self.xi2)

    @classmethod
    def real(cls, f):
        return cls(f, GridFunction.zeros_like(f))

    @classmethod
    def imag(cls, f):
        return cls(GridFunction.zeros_like(f), f)

    @property
    def grid(self):
        return self.xi1

    @property
    def is_real(self):
        return not np.any(self.xi2.values)

    def values(self):
        return self.xi1.values + 1j * self.xi2.values

    def __add__(self, other):
        return ComplexTestFunction(self.xi1 + other.xi1, self.xi2 + other.xi2)

    def scale(self, c):
        """Multiply by a complex scalar c."""
        c = complex(c)
        return ComplexTestFunction(
            c.real * self.xi1 - c.imag * self.xi2,
            c.imag * self.xi1 + c.real * self.xi2,
        )

    def shift(self, s, kernel):
        """ξ + s·kernel for real s and real grid ``kernel``."""
        return ComplexTestFunction(self.xi1 + s * kernel, self.xi2)


def _as_complex_tf(v):
    return v if isinstance(v, ComplexTestFunction) else ComplexTestFunction.real(v)


def bilinear(xi, zeta):
    """Bilinear pairing ⟨ξ, ζ⟩ of complex (or real) grid test functions."""
    xi = _as_complex_tf(xi)
    zeta = _as_complex_tf(zeta)
    re = inner(xi.xi1, zeta.xi1) - inner(xi.xi2, zeta.xi2)
    im = inner(xi.xi1, zeta.xi2) + inner(xi.xi2, zeta.xi1)
    return complex(re, im)


def bilinear_self(xi):
    """⟨ξ, ξ⟩ = ‖ξ₁‖² - ‖ξ₂‖² + 2i⟨ξ₁, ξ₂⟩."""
    xi = _as_complex_tf(xi)
    return complex(norm_sq(xi.xi1) - norm_sq(xi.xi2), 2.0 * inner(xi.xi1, xi.xi2))


@dataclass(frozen=True)
class QuadraticForm:
    """Value of S(s; η, ξ) with its real part and argument in (-π, π]."""

    value: complex
    re_part: float
    arg: float


def _arg(z):
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


class QuadraticFamily:
    """The map s ↦ S(s; η, ξ) = ½(s²⟨η,η⟩ + ⟨ξ,ξ⟩ + 2s⟨η,ξ⟩) with pairings cached."""

    def __init__(self, eta, xi):
        xi = _as_complex_tf(xi)
        self.eta_eta = norm_sq(eta)
        self.xi_xi = bilinear_self(xi)
        self.eta_xi = bilinear(eta, xi)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        val = 0.5 * (s * s * self.eta_eta + self.xi_xi + 2.0 * s * self.eta_xi)
        return complex(val) if val.ndim == 0 else val


def quad_form_S(s, eta, xi):
    """S(s; η, ξ) = ½⟨sη + ξ, sη + ξ⟩ with its real part and argument."""
    val = QuadraticFamily(eta, xi)(float(s))
    return QuadraticForm(val, val.real, _arg(val))


def in_U_theta(xi, theta):
    """True iff ‖ξ₁‖ < √θ and ‖ξ₂‖ < √θ (open ball, boundary excluded)."""
    if not theta > 0:
        raise DomainError("theta must be positive")
    xi = _as_complex_tf(xi)
    return norm_sq(xi.xi1) < theta and norm_sq(xi.xi2) < theta
