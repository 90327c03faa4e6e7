"""The numba and numpy flavours of every hot kernel must agree to rounding."""

import os
import subprocess
import sys

import numpy as np
import pytest

from gammagrey import _accel, _kernels, set_backend
from gammagrey._accel import backend

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def both():
    def run(fn):
        set_backend("numba")
        a = fn()
        set_backend("numpy")
        try:
            b = fn()
        finally:
            set_backend("numba")
        return a, b

    return run


def _close(a, b, rtol):
    a, b = np.asarray(a), np.asarray(b)
    assert np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(b), 1e-300))


def test_gamma_ray_backends_agree(both):
    rng = np.random.default_rng(1)
    z = rng.uniform(0.01, 40, 300) + 1j * rng.uniform(-50, 50, 300)
    (va, oka), (vb, okb) = both(lambda: _kernels.gamma_ray_kernel(0.35, z))
    assert oka.all() and okb.all()
    _close(va, vb, 1e-12)


@pytest.mark.parametrize("a,c", [(0.5, 0.0), (0.9, -3.4), (0.2, 0.3)])
def test_psi_backends_agree(both, a, c):
    z = np.array([0.05, 0.8, 4.0, 20.0 + 3.0j, 1.0 - 2.0j])
    (va, oka), (vb, okb) = both(lambda: _kernels.psi_kernel(a, c, z))
    assert oka.all() and okb.all()
    _close(va, vb, 1e-12)


@pytest.mark.parametrize("beta", [-0.4, -0.15, 0.0, 0.2, 0.45])
def test_pair_backends_agree(both, beta):
    t = np.array([0.1, 1.0, 2.0, 5.0])
    s = np.array([0.1, 0.3, 2.0, 0.01])
    (va, oka), (vb, okb) = both(lambda: _kernels.pair_kernel(beta, t, s))
    assert oka.all() and okb.all()
    _close(va, vb, 1e-12)


@pytest.mark.parametrize("gamma", [0.2, 0.75, 1.3])
def test_rl_backends_agree(both, gamma):
    f = np.sin(np.linspace(0, 3, 257)) ** 2
    va, vb = both(lambda: _kernels.rl_kernel(f, gamma, 3 / 256))
    _close(va[1:], vb[1:], 1e-12)
    assert va[0] == vb[0] == 0.0


def test_rl_exact_on_linear_functions():
    # I^γ x = x^{γ+1}/Γ(γ+2): exact for piecewise-linear data
    from math import gamma as G

    x = np.linspace(0, 2, 41)
    for name in ("numba", "numpy"):
        set_backend(name)
        out = _kernels.rl_kernel(x, 0.6, 0.05)
        np.testing.assert_allclose(out, x**1.6 / G(2.6), rtol=1e-12, atol=1e-15)
    set_backend("numba")


def test_set_backend_validation():
    with pytest.raises(ValueError):
        set_backend("fortran")
    assert backend() in ("numba", "numpy")


def test_env_flag_selects_numpy():
    env = dict(os.environ, GAMMAGREY_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import gammagrey; print(gammagrey.backend())"], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
