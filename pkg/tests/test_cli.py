import csv
import io
import json
import math

import pytest

from hardysob.cli import RunConfig, build_parser, main
from hardysob.exponents import two_star
from hardysob.groundstate import mu_s_quadrature
from hardysob.radial import RadialGrid
from hardysob.regime import ground_state_energy

BASE = ["--N", "3", "--s", "1", "--alpha", "2", "--beta", "2"]
SMALL = ["--M", "1024"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def coupling(lam, mu, kappa):
    return [*BASE, "--lambda", str(lam), "--mu", str(mu), "--kappa", str(kappa)]


def test_regime_degenerate(capsys):
    code, out, _ = run(capsys, "regime", *coupling(2, 2, 1))
    assert code == 0
    rep = json.loads(out)
    assert rep["classification"] == "DegenerateFamily"
    assert rep["sharp_ratio"] == pytest.approx(1 / math.sqrt(2), rel=1e-15)


def test_regime_inadmissible(capsys):
    code, out, _ = run(capsys, "regime", *coupling(2, 2, -5))
    assert code == 2
    rep = json.loads(out)
    assert rep["classification"] == "Inadmissible" and rep["sharp_ratio"] is None
    assert "-1" in rep["rule_fired"]


def test_regime_semi_trivial(capsys):
    code, out, _ = run(capsys, "regime", *coupling(2, 2, -0.5))
    assert code == 0
    assert json.loads(out)["classification"] == "SemiTrivialOnly"


def test_regime_to_file(tmp_path, capsys):
    f = tmp_path / "r.json"
    assert main(["regime", *coupling(1, 1, 1), "--out", str(f)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(f.read_text())["classification"] == "NontrivialGroundState"


@pytest.mark.parametrize(
    "argv",
    [
        ["regime", *coupling(2, 2, 1)[:-2]],
        ["regime", "--N", "3", "--alpha", "2", "--beta", "2", "--lambda", "1", "--mu", "1", "--kappa", "1"],
        ["regime", *coupling(1, 1, 1), "--s1", "1", "--s2", "1"],
        ["regime", "--N", "3", "--s", "1", "--alpha", "2", "--beta", "1", "--lambda", "1", "--mu", "1", "--kappa", "1"],
        ["regime", *coupling(1, 1, 1), "--r-min", "2", "--r-max", "1"],
        ["regime", *coupling(-1, 1, 1)],
        ["regime", *coupling(1, 1, 1), "--jobs", "0"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_precondition_message_names_bound(capsys):
    code, _, err = run(capsys, "regime", "--N", "3", "--s", "1", "--alpha", "2", "--beta", "1",
                       "--lambda", "1", "--mu", "1", "--kappa", "1")
    assert code == 1 and "beta must be > 1" in err
    code, _, err = run(capsys, "regime", "--N", "3", "--s", "1", "--alpha", "2", "--beta", "1.5",
                       "--lambda", "1", "--mu", "1", "--kappa", "1")
    assert code == 1 and "alpha + beta" in err


def test_sharp_constant_degenerate(capsys):
    code, out, _ = run(capsys, "sharp-constant", *coupling(2, 2, 1), *SMALL)
    d = json.loads(out)
    mu = mu_s_quadrature(RadialGrid.logspaced(3, M=1024), 1.0)
    assert d["mu_s"] == mu
    assert d["S"] == pytest.approx(mu / math.sqrt(2), rel=1e-15)
    assert d["c0"] == pytest.approx(mu**2 / 8, rel=1e-14)
    assert d["c0"] == ground_state_energy(d["g_min"], mu, 4.0)


def test_sharp_constant_csv(capsys):
    code, out, _ = run(capsys, "sharp-constant", *coupling(1, 1, 1), *SMALL, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["t0"]) == pytest.approx(1.0, abs=1e-10)
    assert float(row["g_min"]) == pytest.approx(2 / math.sqrt(6), rel=1e-12)
    assert row["classification"] == "NontrivialGroundState"


def test_sharp_constant_inadmissible(capsys):
    assert run(capsys, "sharp-constant", *coupling(2, 2, -5))[0] == 2


def test_ground_state_degenerate(tmp_path, capsys):
    out = tmp_path / "gs"
    code, text, _ = run(capsys, "ground-state", *coupling(2, 2, 1), "--out-dir", str(out))
    assert code == 0
    assert json.loads(text)["all_pass"]
    checks = json.loads((out / "checks.json").read_text())
    assert set(checks) == {"residual", "pohozaev", "decay", "energy_consistency"}
    assert all(c["pass"] for c in checks.values())
    assert (out / "profile.csv").read_text().startswith("r,u,v\n")
    assert json.loads((out / "meta.json").read_text())["t0"] == 1.0


def test_ground_state_semi_trivial(tmp_path, capsys):
    code, _, err = run(capsys, "ground-state", *coupling(3, 3, 1), "--out-dir", str(tmp_path))
    assert code == 2
    assert "SemiTrivialOnly" in err and "three-dim" in err
    assert not (tmp_path / "profile.csv").exists()


def test_ground_state_repeatable(tmp_path, capsys):
    outs = []
    for d in ("a", "b"):
        argv = ["ground-state", *coupling(1, 1, 1), *SMALL, "--seed", "7", "--out-dir", str(tmp_path / d)]
        outs.append(run(capsys, *argv)[1])
    assert outs[0] == outs[1]
    for name in ("profile.csv", "meta.json", "checks.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_ratio_non_increasing(capsys):
    argv = [*BASE, "--lambda", "1", "--mu", "1", "--kappa-min", "0.1", "--kappa-max", "2", "--num", "12"]
    code, out, _ = run(capsys, "sweep", *argv)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 12
    ratios = [float(r["sharp_ratio"]) for r in rows]
    assert all(b <= a for a, b in zip(ratios, ratios[1:]))
    _, out2, _ = run(capsys, "sweep", *argv, "--jobs", "2")
    assert out2 == out


def test_approx_non_decreasing(capsys):
    code, out, _ = run(capsys, "approx", *coupling(2, 2, 1), *SMALL, "--eps", "0.05", "0.1", "0.2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["eps"] for r in rows] == ["0.050000000000000003", "0.10000000000000001", "0.20000000000000001"]
    vals = [float(r["S_eps"]) for r in rows]
    assert all(b >= a * (1 - 1e-4) for a, b in zip(vals, vals[1:]))


def test_fiber_csv(capsys):
    code, out, _ = run(capsys, "fiber", *coupling(2, 2, 1), "--num", "9")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9
    assert all(float(r["g"]) == pytest.approx(1 / math.sqrt(2), abs=1e-12) for r in rows)


@pytest.fixture
def table(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(
        "theta,S,provenance\n"
        f"{math.pi / 4!r},10,user\n{math.pi / 2!r},5,user\n{math.pi!r},3,user\n"
    )
    return path


def test_cones_validate_and_locate(capsys, table):
    code, out, _ = run(capsys, "cones", "validate", "--table", str(table))
    assert code == 0 and json.loads(out) == {"violations": [], "consistent": True}
    code, out, _ = run(capsys, "cones", "locate", "--table", str(table), "--tau", "4")
    d = json.loads(out)
    assert (d["theta_low"], d["theta_high"]) == (math.pi / 2, math.pi)
    assert run(capsys, "cones", "locate", "--table", str(table), "--tau", "2")[0] == 1


def test_cones_gluing_table(capsys):
    code, out, _ = run(capsys, "cones", "gluing", "--N", "3", "--s", "1", "--S-subcone", "1", "--k-max", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["c_k"]) for r in rows] == [4.0**k / 4 for k in range(1, 5)]


def test_cones_attain(capsys):
    for args, expect in (((3, 5, 4), "Attained"), ((4, 5, 4), "NotDecidable")):
        argv = ["cones", "attain", "--S-omega", str(args[0]), "--S0", str(args[1]), "--Sinf", str(args[2])]
        assert json.loads(run(capsys, *argv)[1])["verdict"] == expect
    assert run(capsys, "cones", "attain", "--S-omega", "6", "--S0", "5", "--Sinf", "4")[0] == 1


def test_missing_table_exit_1(capsys, tmp_path):
    assert run(capsys, "cones", "validate", "--table", str(tmp_path / "nope.csv"))[0] == 1


def test_run_config_grid():
    a = build_parser().parse_args(["regime", *coupling(1, 1, 1), "--M", "64"])
    cfg = RunConfig.from_args(a)
    assert cfg.grid.M == 64 and cfg.exps.two_star_s == two_star(3, 1.0)
