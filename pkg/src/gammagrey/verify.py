"""Identity suite behind ``gammagrey verify``.

Every check compares two independently computed numbers and records both,
the tolerance and the verdict, so a report can be audited without rerunning.
At ρ = 1 the measure is white noise and only the degenerate identities are
checked.
"""

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds, donsker, fracops, functionals, mixing
from .pairing import GridFunction, norm_sq
from .specfun import incomplete_gamma_ratio, upper_incomplete_gamma

DEFAULT_TOL = 1e-7
DUALITY_TOL = 1e-4
MC_SIGMAS = 4.0


@dataclass(frozen=True)
class Check:
    name: str
    lhs: object
    rhs: object
    tolerance: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        for key in ("lhs", "rhs"):
            v = d[key]
            d[key] = [v.real, v.imag] if isinstance(v, complex) else float(v)
        return d


def _close(name, lhs, rhs, tol):
    return Check(name, lhs, rhs, tol, bool(abs(lhs - rhs) < tol))


def _bump(center, width, lo=-8.0, hi=8.0, n=3201):
    return GridFunction.from_callable(lambda x: np.exp(-((x - center) ** 2) / (2.0 * width**2)), lo, hi, n)


def _laplace_checks(p, tol):
    for s in (0.0, 0.1, 1.0, 10.0):
        yield _close(f"laplace_identity[s={s}]", mixing.laplace_of_density(p, s), incomplete_gamma_ratio(p.rho, p.theta, s), tol)


def _bernstein_checks(p, tol):
    for S in (0.3, 2.0 + 1.5j, 0.5 - 3.0j):
        lhs = complex(incomplete_gamma_ratio(p.rho, p.theta, S))
        yield _close(f"bernstein_mixture[S={S}]", lhs, functionals.bernstein_mixture(p, S), tol)


def _donsker_checks(p, tol, eta_sq=1.0):
    lhs = donsker.expectation_delta_norm(p, eta_sq)
    yield _close("donsker_expectation", lhs, donsker.mixture_delta_oracle(p, 0.0, eta_sq).real, tol)
    for a in (0.5, 1.5):
        res = donsker.expectation_delta_a_norm(p, a, eta_sq)
        yield _close(f"donsker_shifted[a={a}]", res.value, donsker.mixture_delta_oracle(p, a, eta_sq).real, tol)


def _norm_checks(alpha, tol, inject_k_alpha):
    for t in (0.5, 1.0, 2.0):
        k = fracops.IndicatorKernel.make(alpha, t, norm_const=inject_k_alpha)
        yield _close(f"kernel_norm[t={t}]", fracops.kernel_norm_sq(k), t**alpha, tol)


def _duality_checks(alpha):
    for c, t in ((0.3, 1.0), (-0.5, 2.0)):
        lhs, rhs = fracops.duality_pairing_check(alpha, _bump(c, 0.8), t)
        yield _close(f"duality[center={c},t={t}]", lhs, rhs, DUALITY_TOL)


def _appendix_checks(p):
    for z in (0.5 + 2.0j, 2.0 - 7.0j, 0.05 + 0.3j):
        rep = bounds.appendix_bound(p.rho, z)
        yield Check(f"appendix_bound[z={z}]", rep.lhs, rep.rhs, 0.0, bool(rep.lhs < rep.rhs))


def _cf_checks(p, seed, n_samples):
    phi = _bump(0.0, 0.5).with_values(_bump(0.0, 0.5).values * 1.2)
    est = functionals.mc_char_functional(p, phi, n_samples, seed)
    exact = functionals.char_functional(p, phi)
    tol = MC_SIGMAS * est.stderr
    yield _close("cf_vs_mc", exact, est.mean, tol)


def _degenerate_checks(alpha, tol, inject_k_alpha, seed, n_samples):
    p = mixing.GreyParams(1.0, 1.0)
    for x in (0.3, 2.0):
        yield _close(f"gamma_one[x={x}]", upper_incomplete_gamma(1.0, x), math.exp(-x), tol)
    for s in (0.5, 3.0):
        yield _close(f"laplace_point_mass[s={s}]", mixing.laplace_of_density(p, s), math.exp(-s), tol)
    yield _close("donsker_gaussian", donsker.expectation_delta_norm(p, 1.0), 1.0 / math.sqrt(2.0 * math.pi), tol)
    phi = _bump(0.0, 0.5)
    yield _close(
        "char_functional_gaussian",
        functionals.char_functional(p, phi),
        cmath.exp(-0.5 * norm_sq(phi)),
        tol,
    )
    yield from _norm_checks(alpha, tol, inject_k_alpha)
    yield from _duality_checks(alpha)
    yield from _cf_checks(p, seed, n_samples)


def run_suite(p, alpha=1.4, tol=DEFAULT_TOL, seed=0, n_samples=20000, inject_k_alpha=None):
    """Run the identity suite and return the list of :class:`Check`.

    ``inject_k_alpha`` replaces the kernel normalisation in the norm checks;
    any value other than the true K_α must make them fail.
    """
    if p.is_point_mass:
        return list(_degenerate_checks(alpha, tol, inject_k_alpha, seed, n_samples))
    checks = []
    checks += _laplace_checks(p, tol)
    checks += _bernstein_checks(p, tol)
    checks += _donsker_checks(p, tol)
    checks += _norm_checks(alpha, tol, inject_k_alpha)
    checks += _duality_checks(alpha)
    checks += _appendix_checks(p)
    checks += _cf_checks(p, seed, n_samples)
    return checks


def report(checks, params):
    return {"command": "verify", "params": params, "checks": [c.to_dict() for c in checks]}
