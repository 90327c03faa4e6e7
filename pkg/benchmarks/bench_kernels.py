"""Time the numba and numpy backends of the hot kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best wall time of each backend, the
speed-up, and the largest relative difference between the two results.
"""

import argparse
import time

import numpy as np

from gammagrey import _kernels, set_backend


def _cases():
    rng = np.random.default_rng(0)
    z = rng.uniform(0.05, 30.0, 2000) + 1j * rng.uniform(-30.0, 30.0, 2000)
    zr = rng.uniform(0.05, 30.0, 2000)
    t = np.sort(rng.uniform(0.01, 2.0, 400))
    s = t * rng.uniform(0.1, 1.0, 400)
    f = np.exp(-np.linspace(-6, 6, 20001) ** 2)
    return {
        "gamma_ray (2000 complex z)": lambda: _kernels.gamma_ray_kernel(0.4, z)[0],
        "psi (2000 real z)": lambda: _kernels.psi_kernel(0.6, 0.2, zr)[0],
        "pair beta=-0.2 (400 pairs)": lambda: _kernels.pair_kernel(-0.2, t, s)[0],
        "pair beta=0.3 (400 pairs)": lambda: _kernels.pair_kernel(0.3, t, s)[0],
        "riemann-liouville (20001 nodes)": lambda: _kernels.rl_kernel(f, 0.35, 12.0 / 20000),
        "riemann-liouville (2001 nodes)": lambda: _kernels.rl_kernel(f[::10], 0.35, 12.0 / 2000),
        # scalar regime: one point per call, as inside adaptive quadrature loops
        "gamma_ray (200 scalar calls)": lambda: np.concatenate([_kernels.gamma_ray_kernel(0.4, z[i : i + 1])[0] for i in range(200)]),
        "psi (200 scalar calls)": lambda: np.concatenate([_kernels.psi_kernel(0.6, 0.2, zr[i : i + 1])[0] for i in range(200)]),
        "pair (200 scalar calls)": lambda: np.concatenate([_kernels.pair_kernel(0.3, t[i : i + 1], s[i : i + 1])[0] for i in range(200)]),
    }


def _best(fn, repeat):
    out = fn()  # warm-up; triggers compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speed-up':>9s} {'max rel diff':>13s}")
    for name, fn in _cases().items():
        set_backend("numba")
        t_nb, v_nb = _best(fn, args.repeat)
        set_backend("numpy")
        t_np, v_np = _best(fn, args.repeat)
        scale = np.maximum(np.abs(v_np), 1e-300)
        diff = float(np.max(np.abs(v_nb - v_np) / scale))
        print(f"{name:34s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:9.1f} {diff:13.2e}")
    set_backend("numba")


if __name__ == "__main__":
    main()
