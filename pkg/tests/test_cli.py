import csv
import io
import json
import math

import numpy as np
import pytest

from gammagrey import cli
from gammagrey.donsker import expectation_delta_norm
from gammagrey.mixing import GreyParams, density_f


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_density_table(capsys):
    code, out, _ = run(["density", "--rho", "0.5", "--theta", "1"], capsys)
    assert code == 0
    table = rows(out)
    assert table[0] == ["x", "density", "cdf"]
    by_x = {float(r[0]): r for r in table[1:]}
    assert float(by_x[2.0][1]) == density_f(GreyParams(0.5, 1.0), 2.0)
    assert abs(float(table[-1][2]) - 1.0) < 1e-6
    assert out.count("\r\n") == len(table)


def test_density_point_mass_error(capsys):
    code, _, err = run(["density", "--rho", "1", "--theta", "1"], capsys)
    assert code == 2
    assert "point-mass convention" in err


def test_bad_parameters_exit_2(capsys):
    assert run(["density", "--rho", "1.5"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["simulate", "--seed", "1", "--n-paths", "0"])
    assert info.value.code == 2
    assert run(["simulate", "--n-paths", "2"], capsys)[0] == 2  # seed missing


def test_donsker_table(capsys):
    code, out, _ = run(["donsker", "--rho", "0.5", "--theta", "1", "--a-max", "2", "--n-points", "5"], capsys)
    assert code == 0
    table = rows(out)
    assert table[0] == ["a", "series", "oracle", "discrepancy", "n_terms"]
    assert float(table[1][1]) == pytest.approx(expectation_delta_norm(GreyParams(0.5, 1.0), 1.0), rel=1e-14)
    assert all(float(r[3]) < 1e-6 for r in table[1:])


def test_donsker_white_noise_rows(capsys):
    _, out, _ = run(["donsker", "--rho", "1", "--eta-norm", "1.5", "--n-points", "4"], capsys)
    for r in rows(out)[1:]:
        a = float(r[0])
        gauss = math.exp(-a * a / (2 * 2.25)) / math.sqrt(2 * math.pi * 2.25)
        assert float(r[1]) == pytest.approx(gauss, rel=1e-12)


def test_simulate_golden_header_and_sidecar(tmp_path, capsys):
    out = tmp_path / "paths.csv"
    args = ["simulate", "--process", "ou", "--alpha", "1.3", "--lambda", "2", "--kappa", "0.5", "--x0", "1"]
    code, _, _ = run(args + ["--seed", "5", "--n-paths", "3", "--n-times", "4", "--out", str(out)], capsys)
    assert code == 0
    text = out.read_bytes().decode()
    assert text.splitlines()[0] == "t,path_0,path_1,path_2"
    table = rows(text)
    assert [float(r[0]) for r in table[1:]] == [0.25, 0.5, 0.75, 1.0]
    meta = json.loads((tmp_path / "paths.json").read_text())
    assert meta["process"] == "ou" and meta["seed"] == 5
    assert {"alpha", "rho", "theta", "K_alpha", "rng", "lambda", "kappa", "x0"} <= set(meta)
    assert "philox" in meta["rng"]


def test_simulate_float_round_trip(tmp_path, capsys):
    out = tmp_path / "g.csv"
    run(["simulate", "--seed", "2", "--n-paths", "2", "--n-times", "3", "--alpha", "0.7", "--out", str(out)], capsys)
    from gammagrey.ggbm import simulate_ggbm

    s = simulate_ggbm(0.7, GreyParams(0.5, 1.0), np.array([1 / 3, 2 / 3, 1.0]), 2, 2)
    got = np.array([[float(v) for v in r[1:]] for r in rows(out.read_text())[1:]])
    np.testing.assert_array_equal(got, s.paths.T)


@pytest.mark.parametrize(
    "args",
    [
        ["simulate", "--process", "ggbm", "--alpha", "0.6", "--n-paths", "20", "--n-times", "10"],
        ["simulate", "--process", "ou", "--alpha", "1.4", "--n-paths", "20", "--n-times", "10"],
        ["sample", "-n", "200"],
    ],
)
def test_determinism(tmp_path, capsys, args):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        assert run(args + ["--seed", "99", "--out", str(path)], capsys)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    path = tmp_path / "other.csv"
    run(args + ["--seed", "100", "--out", str(path)], capsys)
    assert path.read_bytes() != outs[0]


def test_json_format(capsys):
    _, out, _ = run(["simulate", "--seed", "1", "--n-paths", "2", "--n-times", "2", "--format", "json"], capsys)
    doc = json.loads(out)
    assert len(doc["paths"]) == 2 and doc["times"] == [0.5, 1.0]


def test_verify_report(capsys):
    code, out, _ = run(["verify", "--seed", "1", "--alpha", "0.8"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["command"] == "verify"
    assert set(rep["checks"][0]) == {"name", "lhs", "rhs", "tolerance", "pass"}
    assert all(c["pass"] for c in rep["checks"])
    names = {c["name"].split("[")[0] for c in rep["checks"]}
    assert {"laplace_identity", "bernstein_mixture", "donsker_expectation", "duality", "appendix_bound", "cf_vs_mc", "kernel_norm"} <= names


def test_verify_sabotage_and_point_mass(capsys):
    code, out, _ = run(["verify", "--seed", "1", "--alpha", "0.8", "--inject-k-alpha", "1.0"], capsys)
    rep = json.loads(out)
    assert code == 3
    failed = {c["name"].split("[")[0] for c in rep["checks"] if not c["pass"]}
    assert failed == {"kernel_norm"}
    code, out, _ = run(["verify", "--seed", "1", "--rho", "1"], capsys)
    names = {c["name"].split("[")[0] for c in json.loads(out)["checks"]}
    assert code == 0 and "appendix_bound" not in names and "donsker_gaussian" in names
