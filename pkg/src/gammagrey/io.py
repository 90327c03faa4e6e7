"""CSV and JSON writers for tables and path ensembles.

CSV follows RFC 4180 (comma separated, CRLF line ends) and writes floats
with ``repr`` so that values round-trip exactly.
"""

import csv
import io
import json

from . import rng as _rng


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def table_csv(header, rows):
    """Render a table as CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def table_json(header, rows, **meta):
    rows = [[float(v) if hasattr(v, "__float__") and not isinstance(v, (int, bool)) else v for v in r] for r in rows]
    return json.dumps({**meta, "columns": list(header), "rows": rows}, indent=2, sort_keys=True) + "\n"


def paths_csv(sample):
    """``t,path_0,...,path_{n-1}``; one row per time."""
    header = ["t"] + [f"path_{i}" for i in range(sample.n_paths)]
    rows = ([float(t)] + [float(x) for x in sample.paths[:, j]] for j, t in enumerate(sample.times))
    return table_csv(header, rows)


def paths_sidecar(sample, process):
    """Metadata record written next to a path CSV."""
    meta = {
        "process": process,
        "alpha": float(sample.alpha),
        "rho": float(sample.params.rho),
        "theta": float(sample.params.theta),
        "seed": int(sample.seed),
        "K_alpha": float(sample.extra["K_alpha"]),
        "n_paths": int(sample.n_paths),
        "n_times": int(len(sample.times)),
        "rng": _rng.SCHEME,
    }
    for key in ("lambda", "kappa", "x0"):
        if key in sample.extra:
            meta[key] = float(sample.extra[key])
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"


def paths_json(sample, process):
    meta = json.loads(paths_sidecar(sample, process))
    meta["times"] = [float(t) for t in sample.times]
    meta["paths"] = sample.paths.tolist()
    return json.dumps(meta, sort_keys=True) + "\n"
