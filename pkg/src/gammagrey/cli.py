"""Command-line interface: ``gammagrey {density,donsker,sample,simulate,verify}``.

Exit codes: 0 success, 2 usage or parameter error, 3 numeric failure
(non-convergence or a failed identity check).
"""

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import donsker, io, mixing, verify
from .errors import ConvergenceError, DegenerateDensityError, DomainError
from .ggbm import simulate_ggbm
from .ou import OuParams, simulate_ou
from .rng import SCHEME, check_seed

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    rho: float = 0.5
    theta: float = 1.0
    alpha: float = 1.0
    lam: float = 1.0
    kappa: float = 1.0
    x0: float = 0.0
    t_max: float = 1.0
    n_times: int = 100
    n_paths: int = 1000
    seed: int = None
    out_path: str = None
    format: str = "csv"
    tol: float = verify.DEFAULT_TOL

    @property
    def params(self):
        return mixing.GreyParams(self.rho, self.theta)

    def times(self):
        return self.t_max * np.arange(1, self.n_times + 1) / self.n_times

    def require_seed(self):
        if self.seed is None:
            raise DomainError(f"{self.command} is stochastic and needs --seed")
        return check_seed(self.seed)


class UsageError(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _emit(text, out_path):
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def _table(cfg, header, rows, **meta):
    if cfg.format == "json":
        return io.table_json(header, rows, command=cfg.command, **meta)
    return io.table_csv(header, rows)


def cmd_density(cfg, x_max=None, n_points=200):
    """Tabulate f_{ρ,θ} and its CDF on (1, x_max]."""
    p = cfg.params
    if p.is_point_mass:
        raise DegenerateDensityError(
            "rho = 1 is the point-mass convention: R = 1 almost surely and f_{rho,theta} has no density"
        )
    if x_max is None:
        x_max = 1.0 + 40.0 / p.theta
    x = 1.0 + (x_max - 1.0) * np.arange(1, n_points + 1) / n_points
    f = mixing.density_f(p, x)
    F = mixing.cdf_R(p, x)
    rows = [(float(a), float(b), float(c)) for a, b, c in zip(x, f, F)]
    _emit(_table(cfg, ("x", "density", "cdf"), rows, rho=p.rho, theta=p.theta), cfg.out_path)
    return rows


def cmd_donsker(cfg, eta_norm=1.0, a_max=3.0, n_points=31):
    """Tabulate E[δ(⟨·,η⟩ - a)] by series and by mixture quadrature."""
    p = cfg.params
    eta_sq = eta_norm * eta_norm
    rows = []
    for a in np.linspace(0.0, a_max, n_points):
        res = donsker.expectation_delta_a_norm(p, float(a), eta_sq)
        oracle = donsker.mixture_delta_oracle(p, float(a), eta_sq).real
        rows.append((float(a), float(res.value), float(oracle), abs(res.value - oracle), res.n_terms))
    header = ("a", "series", "oracle", "discrepancy", "n_terms")
    _emit(_table(cfg, header, rows, rho=p.rho, theta=p.theta, eta_norm=eta_norm), cfg.out_path)
    return rows


def cmd_sample(cfg, n):
    """Draw R by rejection sampling."""
    seed = cfg.require_seed()
    s = mixing.sample_R(cfg.params, n, seed=seed)
    rows = [(float(v),) for v in s.values]
    meta = {"seed": seed, "acceptance_rate": s.acceptance_rate, "rng": SCHEME}
    _emit(_table(cfg, ("R",), rows, **meta), cfg.out_path)
    return s


def _sidecar_path(out_path):
    path = Path(out_path)
    return path.with_suffix(".json") if path.suffix != ".json" else path.with_suffix(".meta.json")


def cmd_simulate(cfg, process="ggbm", route="gram"):
    """Simulate a path ensemble; CSV output gets a JSON metadata sidecar next to it."""
    seed = cfg.require_seed()
    if cfg.n_paths < 1 or cfg.n_times < 1:
        raise UsageError("--n-paths and --n-times must be positive")
    p, times = cfg.params, cfg.times()
    if process == "ggbm":
        sample = simulate_ggbm(cfg.alpha, p, times, cfg.n_paths, seed)
    else:
        sample = simulate_ou(cfg.alpha, p, OuParams(cfg.lam, cfg.kappa, cfg.x0), times, cfg.n_paths, seed, route=route)
    if cfg.format == "json":
        _emit(io.paths_json(sample, process), cfg.out_path)
        return sample
    _emit(io.paths_csv(sample), cfg.out_path)
    if cfg.out_path not in (None, "-"):
        _emit(io.paths_sidecar(sample, process), str(_sidecar_path(cfg.out_path)))
    return sample


def cmd_verify(cfg, inject_k_alpha=None, n_samples=20000):
    """Run the identity suite; returns the JSON report dict."""
    seed = cfg.require_seed()
    checks = verify.run_suite(cfg.params, cfg.alpha, cfg.tol, seed, n_samples, inject_k_alpha)
    params = {"rho": cfg.rho, "theta": cfg.theta, "alpha": cfg.alpha, "seed": seed, "tol": cfg.tol}
    if inject_k_alpha is not None:
        params["inject_k_alpha"] = inject_k_alpha
    rep = verify.report(checks, params)
    _emit(json.dumps(rep, indent=2) + "\n", cfg.out_path)
    return rep


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rho", type=float, default=0.5)
    common.add_argument("--theta", type=float, default=1.0)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    proc = argparse.ArgumentParser(add_help=False)
    proc.add_argument("--alpha", type=float, default=1.0)
    proc.add_argument("--lambda", dest="lam", type=float, default=1.0)
    proc.add_argument("--kappa", type=float, default=1.0)
    proc.add_argument("--x0", type=float, default=0.0)
    proc.add_argument("--t-max", type=float, default=1.0)
    proc.add_argument("--n-times", type=_positive_int, default=100)
    proc.add_argument("--n-paths", type=_positive_int, default=1000)

    parser = argparse.ArgumentParser(prog="gammagrey", description="Gamma-grey noise numerics.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", parents=[common], help="tabulate the mixing density and CDF")
    d.add_argument("--x-max", type=float, default=None)
    d.add_argument("--n-points", type=_positive_int, default=200)

    dk = sub.add_parser("donsker", parents=[common], help="tabulate E[delta(<.,eta> - a)]")
    dk.add_argument("--eta-norm", type=float, default=1.0)
    dk.add_argument("--a-max", type=float, default=3.0)
    dk.add_argument("--n-points", type=_positive_int, default=31)

    s = sub.add_parser("sample", parents=[common], help="draw the mixing variable R")
    s.add_argument("-n", "--n-samples", type=_positive_int, default=1000)

    sim = sub.add_parser("simulate", parents=[common, proc], help="simulate ggbm or ou paths")
    sim.add_argument("--process", choices=("ggbm", "ou"), default="ggbm")
    sim.add_argument("--route", choices=("gram", "path"), default="gram", help="ou only")

    v = sub.add_parser("verify", parents=[common, proc], help="run the identity suite")
    v.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    v.add_argument("--n-samples", type=_positive_int, default=20000)
    v.add_argument("--inject-k-alpha", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def _config(ns):
    fields = {k: getattr(ns, k) for k in RunConfig.__dataclass_fields__ if hasattr(ns, k)}
    fields["out_path"] = ns.out
    if not all(math.isfinite(v) for v in (ns.rho, ns.theta)):
        raise DomainError("rho and theta must be finite")
    return RunConfig(**fields)


def run(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = _config(ns)
    if ns.command == "density":
        cmd_density(cfg, ns.x_max, ns.n_points)
    elif ns.command == "donsker":
        cmd_donsker(cfg, ns.eta_norm, ns.a_max, ns.n_points)
    elif ns.command == "sample":
        cmd_sample(cfg, ns.n_samples)
    elif ns.command == "simulate":
        cmd_simulate(cfg, ns.process, ns.route)
    else:
        rep = cmd_verify(cfg, ns.inject_k_alpha, ns.n_samples)
        if not all(c["pass"] for c in rep["checks"]):
            return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    try:
        return run(argv)
    except (DomainError, UsageError) as exc:
        print(f"gammagrey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"gammagrey: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
