"""Hot numerical kernels, each in a numba flavour and a pure-numpy flavour.

Every public ``*_kernel`` function dispatches on :data:`gammagrey._accel.USE_NUMBA`.
Both flavours compute the same quadrature on the same nodes; they agree to
rounding, which ``tests/test_kernels.py`` checks.

The quadratures are double-exponential trapezoid rules (exp-sinh on a half
line, tanh-sinh on a finite interval) refined by step halving until two
successive levels agree to ``tol`` relative.
"""

import math

import numpy as np

from . import _accel
from ._accel import njit

HALF_PI = 0.5 * math.pi

# exp-sinh window for the incomplete-gamma integral along t = z + w;
# w = exp(pi/2 sinh s) spans ~2e-51 .. 800 (the integrand carries e^{-w}).
GAMMA_S_LO = -5.0
GAMMA_S_HI = 2.3
_TAU_CUT = 800.0
_LOG_TAU_CUT = math.log(_TAU_CUT)

H0 = 0.5
MIN_LEVEL = 2


def _psi_window(a):
    s_lo = -math.asinh((45.0 / a + 5.0) / HALF_PI)
    s_hi = math.asinh((_LOG_TAU_CUT + 1.0) / HALF_PI)
    return s_lo, s_hi


def _pair_windows(beta):
    alpha = 2.0 * beta + 1.0
    a_lo = -math.asinh((45.0 / min(1.0, alpha) + 5.0) / HALF_PI)
    a_hi = math.asinh((45.0 / (2.0 - alpha) + 5.0) / HALF_PI)
    b_m = math.asinh((45.0 / min(1.0, alpha) + 5.0) / math.pi)
    return a_lo, a_hi, b_m


# ---------------------------------------------------------------------------
# numba scalar kernels
# ---------------------------------------------------------------------------


@njit
def _softplus(d):
    if d > 0.0:
        return d + math.log1p(math.exp(-d))
    return math.log1p(math.exp(d))


@njit
def _ray_term(rho, inv_zr, inv_zi, s):
    e = HALF_PI * math.sinh(s)
    if e > _LOG_TAU_CUT:
        return 0.0, 0.0
    w = math.exp(e)
    # (1 + w/z)^{rho-1} e^{-w} w'(s)
    ur = 1.0 + w * inv_zr
    ui = w * inv_zi
    lm = -w + (rho - 1.0) * math.log(math.hypot(ur, ui)) + e + math.log(HALF_PI * math.cosh(s))
    if lm < -745.0:
        return 0.0, 0.0
    mag = math.exp(lm)
    ph = (rho - 1.0) * math.atan2(ui, ur)
    return mag * math.cos(ph), mag * math.sin(ph)


@njit
def _gamma_ray_one(rho, zr, zi, tol, max_level):
    az2 = zr * zr + zi * zi
    inv_zr = zr / az2
    inv_zi = -zi / az2
    h = H0
    span = GAMMA_S_HI - GAMMA_S_LO
    sr = 0.0
    si = 0.0
    for j in range(int(span / h) + 1):
        a, b = _ray_term(rho, inv_zr, inv_zi, GAMMA_S_LO + j * h)
        sr += a
        si += b
    ir = h * sr
    ii = h * si
    ok = False
    for lev in range(max_level):
        h *= 0.5
        n_mid = int((span / h - 1.0) / 2.0) + 1
        for j in range(n_mid):
            a, b = _ray_term(rho, inv_zr, inv_zi, GAMMA_S_LO + (2 * j + 1) * h)
            sr += a
            si += b
        nr = h * sr
        ni = h * si
        diff = math.hypot(nr - ir, ni - ii)
        ir = nr
        ii = ni
        if lev >= MIN_LEVEL and diff <= tol * math.hypot(nr, ni):
            ok = True
            break
    # prefactor z^{rho-1} e^{-z}
    lmag = 0.5 * (rho - 1.0) * math.log(az2) - zr
    ph = (rho - 1.0) * math.atan2(zi, zr) - zi
    mag = math.exp(lmag)
    pr = mag * math.cos(ph)
    pi_ = mag * math.sin(ph)
    return complex(pr * ir - pi_ * ii, pr * ii + pi_ * ir), ok


@njit
def _gamma_ray_nb(rho, z, tol, max_level):
    out = np.empty(z.size, np.complex128)
    ok = np.empty(z.size, np.bool_)
    for i in range(z.size):
        out[i], ok[i] = _gamma_ray_one(rho, z[i].real, z[i].imag, tol, max_level)
    return out, ok


@njit
def _psi_term(a, c, zr, zi, log_zr, s):
    e = HALF_PI * math.sinh(s)
    if e > _LOG_TAU_CUT:
        return 0.0, 0.0
    L = e - log_zr
    u = math.exp(L)
    lm = -zr * u + a * L + (c - a - 1.0) * math.log1p(u) + math.log(HALF_PI * math.cosh(s))
    if lm < -745.0:
        return 0.0, 0.0
    mag = math.exp(lm)
    ph = -zi * u
    return mag * math.cos(ph), mag * math.sin(ph)


@njit
def _psi_one(a, c, zr, zi, s_lo, s_hi, tol, max_level):
    log_zr = math.log(zr)
    h = H0
    span = s_hi - s_lo
    sr = 0.0
    si = 0.0
    for j in range(int(span / h) + 1):
        x, y = _psi_term(a, c, zr, zi, log_zr, s_lo + j * h)
        sr += x
        si += y
    ir = h * sr
    ii = h * si
    ok = False
    for lev in range(max_level):
        h *= 0.5
        n_mid = int((span / h - 1.0) / 2.0) + 1
        for j in range(n_mid):
            x, y = _psi_term(a, c, zr, zi, log_zr, s_lo + (2 * j + 1) * h)
            sr += x
            si += y
        nr = h * sr
        ni = h * si
        diff = math.hypot(nr - ir, ni - ii)
        ir = nr
        ii = ni
        if lev >= MIN_LEVEL and diff <= tol * math.hypot(nr, ni):
            ok = True
            break
    return complex(ir, ii), ok


@njit
def _psi_nb(a, c, z, s_lo, s_hi, tol, max_level):
    out = np.empty(z.size, np.complex128)
    ok = np.empty(z.size, np.bool_)
    for i in range(z.size):
        out[i], ok[i] = _psi_one(a, c, z[i].real, z[i].imag, s_lo, s_hi, tol, max_level)
    return out, ok


@njit
def _pair_a_term(beta, log_t, log_s, x):
    L = HALF_PI * math.sinh(x)
    et = math.expm1(beta * _softplus(log_t - L))
    es = math.expm1(beta * _softplus(log_s - L))
    if et == 0.0 or es == 0.0:
        return 0.0
    lm = (2.0 * beta + 1.0) * L + math.log(abs(et)) + math.log(abs(es)) + math.log(HALF_PI * math.cosh(x))
    if lm < -745.0:
        return 0.0
    return math.exp(lm)


@njit
def _pair_b_term(beta, s, d, x):
    e = math.pi * math.sinh(x)
    if abs(e) > 700.0:
        if e > 0.0:
            return 0.0
    log_w = math.log(s) - _softplus(-e)
    w = math.exp(log_w)
    if e < -700.0:
        jac_log = math.log(s * math.pi * math.cosh(x)) + e
    else:
        jac_log = math.log(s * math.pi * math.cosh(x) / (2.0 + 2.0 * math.cosh(e)))
    lm = beta * log_w + beta * math.log(d + w) + jac_log
    if lm < -745.0:
        return 0.0
    return math.exp(lm)


@njit
def _pair_one(beta, t, s, a_lo, a_hi, b_m, tol, max_level):
    # ∫_0^∞ ((t+v)^β - v^β)((s+v)^β - v^β) dv + ∫_0^s (t-s+w)^β w^β dw, s <= t
    ok = True
    total = 0.0
    if beta != 0.0:
        log_t = math.log(t)
        log_s = math.log(s)
        h = H0
        span = a_hi - a_lo
        acc = 0.0
        for j in range(int(span / h) + 1):
            acc += _pair_a_term(beta, log_t, log_s, a_lo + j * h)
        est = h * acc
        good = False
        for lev in range(max_level):
            h *= 0.5
            n_mid = int((span / h - 1.0) / 2.0) + 1
            for j in range(n_mid):
                acc += _pair_a_term(beta, log_t, log_s, a_lo + (2 * j + 1) * h)
            new = h * acc
            diff = abs(new - est)
            est = new
            if lev >= MIN_LEVEL and diff <= tol * abs(new):
                good = True
                break
        ok = ok and good
        total += est
    d = t - s
    h = H0
    span = 2.0 * b_m
    acc = 0.0
    for j in range(int(span / h) + 1):
        acc += _pair_b_term(beta, s, d, -b_m + j * h)
    est = h * acc
    good = False
    for lev in range(max_level):
        h *= 0.5
        n_mid = int((span / h - 1.0) / 2.0) + 1
        for j in range(n_mid):
            acc += _pair_b_term(beta, s, d, -b_m + (2 * j + 1) * h)
        new = h * acc
        diff = abs(new - est)
        est = new
        if lev >= MIN_LEVEL and diff <= tol * abs(new):
            good = True
            break
    ok = ok and good
    return total + est, ok


@njit
def _pairs_nb(beta, t, s, a_lo, a_hi, b_m, tol, max_level):
    out = np.empty(t.size)
    ok = np.empty(t.size, np.bool_)
    for i in range(t.size):
        out[i], ok[i] = _pair_one(beta, t[i], s[i], a_lo, a_hi, b_m, tol, max_level)
    return out, ok


@njit
def _rl_nb(f, gamma, h):
    n = f.size
    out = np.zeros(n)
    g1 = gamma + 1.0
    scale = h**gamma / math.gamma(gamma + 2.0)
    c = np.empty(n)
    c[0] = 1.0
    for m in range(1, n):
        c[m] = (m + 1.0) ** g1 - 2.0 * m**g1 + (m - 1.0) ** g1
    for k in range(1, n):
        acc = ((k - 1.0) ** g1 - (k - gamma - 1.0) * k**gamma) * f[0]
        for j in range(1, k + 1):
            acc += c[k - j] * f[j]
        out[k] = acc * scale
    return out


# ---------------------------------------------------------------------------
# numpy flavours
# ---------------------------------------------------------------------------


def _softplus_np(d):
    return np.where(d > 0.0, d + np.log1p(np.exp(-np.abs(d))), np.log1p(np.exp(np.minimum(d, 0.0))))


def _de_levels_np(term, m, s_lo, s_hi, tol, max_level, dtype):
    """Drive step-halving for ``m`` integrals at once.

    ``term(s, rows)`` returns the weighted integrand at nodes ``s`` for the
    integrals listed in ``rows``, shape ``(len(rows), len(s))``.
    """
    span = s_hi - s_lo
    h = H0
    rows = np.arange(m)
    acc = term(s_lo + h * np.arange(int(span / h) + 1), rows).sum(axis=1).astype(dtype)
    est = h * acc
    ok = np.zeros(m, dtype=bool)
    for lev in range(max_level):
        h *= 0.5
        active = np.flatnonzero(~ok)
        if active.size == 0:
            break
        n_mid = int((span / h - 1.0) / 2.0) + 1
        acc[active] += term(s_lo + h * (2 * np.arange(n_mid) + 1), active).sum(axis=1)
        new = h * acc[active]
        diff = np.abs(new - est[active])
        est[active] = new
        if lev >= MIN_LEVEL:
            ok[active] = diff <= tol * np.abs(new)
    return est, ok


def _gamma_ray_np(rho, z, tol, max_level):
    inv_z = 1.0 / z

    def term(s, rows):
        e = HALF_PI * np.sinh(s)
        keep = e <= _LOG_TAU_CUT
        e = np.where(keep, e, 0.0)
        w = np.exp(e)
        u = 1.0 + w[None, :] * inv_z[rows, None]
        lm = -w[None, :] + (rho - 1.0) * np.log(np.abs(u)) + (e + np.log(HALF_PI * np.cosh(s)))[None, :]
        val = np.exp(lm + 1j * (rho - 1.0) * np.angle(u))
        return np.where(keep[None, :] & (lm > -745.0), val, 0.0)

    est, ok = _de_levels_np(term, z.size, GAMMA_S_LO, GAMMA_S_HI, tol, max_level, np.complex128)
    pref = np.exp((rho - 1.0) * np.log(z) - z)
    return pref * est, ok


def _psi_np(a, c, z, s_lo, s_hi, tol, max_level):
    zr = z.real
    zi = z.imag
    log_zr = np.log(zr)

    def term(s, rows):
        e = HALF_PI * np.sinh(s)
        keep = e <= _LOG_TAU_CUT
        e = np.where(keep, e, 0.0)
        L = e[None, :] - log_zr[rows, None]
        u = np.exp(L)
        lm = -zr[rows, None] * u + a * L + (c - a - 1.0) * np.log1p(u) + np.log(HALF_PI * np.cosh(s))[None, :]
        val = np.exp(lm - 1j * zi[rows, None] * u)
        return np.where(keep[None, :] & (lm > -745.0), val, 0.0)

    return _de_levels_np(term, z.size, s_lo, s_hi, tol, max_level, np.complex128)


def _pairs_np(beta, t, s, a_lo, a_hi, b_m, tol, max_level):
    log_t = np.log(t)
    log_s = np.log(s)
    d = t - s

    def a_term(x, rows):
        L = HALF_PI * np.sinh(x)
        with np.errstate(divide="ignore"):
            et = np.log(np.abs(np.expm1(beta * _softplus_np(log_t[rows, None] - L[None, :]))))
            es = np.log(np.abs(np.expm1(beta * _softplus_np(log_s[rows, None] - L[None, :]))))
        lm = (2.0 * beta + 1.0) * L[None, :] + et + es + np.log(HALF_PI * np.cosh(x))[None, :]
        return np.where(lm > -745.0, np.exp(np.maximum(lm, -745.0)), 0.0)

    def b_term(x, rows):
        e = np.pi * np.sinh(x)
        log_w = np.log(s[rows, None]) - _softplus_np(-e)[None, :]
        w = np.exp(log_w)
        with np.errstate(over="ignore"):
            jac = np.where(
                e < -700.0,
                np.log(np.pi * np.cosh(x)) + e,
                np.log(np.pi * np.cosh(x) / (2.0 + 2.0 * np.cosh(np.minimum(e, 700.0)))),
            )
        lm = beta * log_w + beta * np.log(d[rows, None] + w) + np.log(s[rows, None]) + jac[None, :]
        lm = np.where((e > 700.0)[None, :], -np.inf, lm)
        return np.where(lm > -745.0, np.exp(np.maximum(lm, -745.0)), 0.0)

    if beta != 0.0:
        va, oka = _de_levels_np(a_term, t.size, a_lo, a_hi, tol, max_level, np.float64)
    else:
        va, oka = np.zeros(t.size), np.ones(t.size, dtype=bool)
    vb, okb = _de_levels_np(b_term, t.size, -b_m, b_m, tol, max_level, np.float64)
    return va + vb, oka & okb


def _rl_np(f, gamma, h):
    n = f.size
    m = np.arange(n, dtype=float)
    g1 = gamma + 1.0
    c = np.empty(n)
    c[0] = 1.0
    mm = m[1:]
    c[1:] = (mm + 1.0) ** g1 - 2.0 * mm**g1 + (mm - 1.0) ** g1
    out = np.convolve(f, c)[:n]
    # the j = 0 node carries the half-panel start weight instead of c[k]
    a0 = np.zeros(n)
    k = m[1:]
    a0[1:] = (k - 1.0) ** g1 - (k - gamma - 1.0) * k**gamma
    out = out - f[0] * c + f[0] * a0
    out[0] = 0.0
    return out * h**gamma / math.gamma(gamma + 2.0)


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------

_CHUNK = 512


def _chunked(fn, n, *arrays):
    vals = []
    oks = []
    for lo in range(0, n, _CHUNK):
        v, ok = fn(*(a[lo : lo + _CHUNK] for a in arrays))
        vals.append(v)
        oks.append(ok)
    if not vals:
        return np.empty(0), np.empty(0, dtype=bool)
    return np.concatenate(vals), np.concatenate(oks)


def gamma_ray_kernel(rho, z, tol=1e-13, max_level=10):
    """Γ(ρ, z) = z^{ρ-1} e^{-z} ∫_0^∞ e^{-w} (1 + w/z)^{ρ-1} dw by exp-sinh.

    The path t = z + w runs parallel to the real axis, so the integrand does
    not oscillate even close to the imaginary axis. Returns ``(values, converged)``; ``z`` is a 1-d complex array without zeros.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if _accel.USE_NUMBA:
        return _gamma_ray_nb(float(rho), z, float(tol), int(max_level))
    return _chunked(lambda zz: _gamma_ray_np(float(rho), zz, tol, max_level), z.size, z)


def psi_kernel(a, c, z, tol=1e-13, max_level=11):
    """Γ(a) Ψ(a, c; z) = ∫_0^∞ e^{-zu} u^{a-1} (1+u)^{c-a-1} du for a > 0, re z > 0."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    s_lo, s_hi = _psi_window(float(a))
    if _accel.USE_NUMBA:
        return _psi_nb(float(a), float(c), z, s_lo, s_hi, float(tol), int(max_level))
    return _chunked(lambda zz: _psi_np(float(a), float(c), zz, s_lo, s_hi, tol, max_level), z.size, z)


def pair_kernel(beta, t, s, tol=1e-12, max_level=11):
    """Unnormalised ⟨k_t, k_s⟩ for the fractional indicator kernels, elementwise with s <= t."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    a_lo, a_hi, b_m = _pair_windows(float(beta))
    if _accel.USE_NUMBA:
        return _pairs_nb(float(beta), t, s, a_lo, a_hi, b_m, float(tol), int(max_level))
    return _chunked(
        lambda tt, ss: _pairs_np(float(beta), tt, ss, a_lo, a_hi, b_m, tol, max_level), t.size, t, s
    )


def rl_kernel(f, gamma, h):
    """Product-trapezoid lower Riemann-Liouville integral of order ``gamma`` on a uniform grid.

    ``f`` is interpolated piecewise linearly and integrated exactly against
    ``(x - y)^{gamma-1} / Γ(gamma)``; the grid start is the lower limit.
    """
    f = np.ascontiguousarray(f, dtype=np.float64)
    if _accel.USE_NUMBA:
        return _rl_nb(f, float(gamma), float(h))
    return _rl_np(f, float(gamma), float(h))
