import json

import numpy as np
import pytest

from waitlaws.cli import main
from waitlaws.experiments import ConfigError, ExperimentConfig, default_config, run


def _run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    return code, out


def test_small_critical_run_writes_outputs(tmp_path, capsys):
    code, out = _run(tmp_path, "run", "--experiment", "critical", "--horizons", "100,1000",
                     "--samples", "2000", "--seed", "3", "--records")
    assert code in (0, 1)
    rep = json.loads((out / "report.json").read_text())
    stats = [r["statistic"] for r in rep["rows"]]
    assert "ks[lambda vs uniform]" in stats and "ks[delta vs uniform]_decrease" in stats
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["seed"] == 3 and "jobs" not in man["config"] and "out" not in man["config"]
    assert "records_n1000.csv" in man["files"]
    header = (out / "records_n1000.csv").read_text().splitlines()[0]
    assert header == "n,Z,Y,V,in_A_n,lambda,delta"
    assert "check" in capsys.readouterr().out


def test_runs_are_byte_identical_across_jobs(tmp_path):
    args = ["run", "--experiment", "sigma", "--horizons", "50,500", "--samples", "3000", "--seed", "11"]
    _, a = _run(tmp_path, *args, "--jobs", "1", name="a")
    _, b = _run(tmp_path, *args, "--jobs", "2", name="b")
    _, c = _run(tmp_path, *args, "--jobs", "1", name="c")
    for f in ("report.json", "report.csv", "manifest.json"):
        assert (a / f).read_bytes() == (b / f).read_bytes() == (c / f).read_bytes()


def test_degenerate_alpha_rejected(tmp_path, capsys):
    for a in ("0", "1"):
        code, _ = _run(tmp_path, "run", "--experiment", "dynkin-lamperti", "--alpha", a)
        assert code == 2
        assert "critical" in capsys.readouterr().err


def test_config_errors_exit_2(tmp_path, capsys):
    assert main(["run", "--experiment", "critical-thaler", "--map", "farey"]) == 2
    assert main(["run", "--experiment", "critical-thaler", "--cap", "10", "--horizons", "1000"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "sigma", "colour": "blue"}))
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run"]) == 2
    # the Gauss map has no reference set, so no waiting-time experiment runs on it
    assert main(["run", "--experiment", "sigma", "--map", "gauss"]) == 2
    assert "error" in capsys.readouterr().err


def test_config_precedence(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"experiment": "sigma", "samples": 1500, "seed": 4,
                                   "horizons": [40, 400]}))
    _, out = _run(tmp_path, "run", "--config", str(cfgfile), "--seed", "9")
    man = json.loads((out / "manifest.json").read_text())["config"]
    assert man["experiment"] == "sigma"
    assert man["samples"] == 1500 and man["seed"] == 9 and man["horizons"] == [40, 400]
    assert man["x_grid"] == default_config("sigma").x_grid


def test_tables_subcommand(tmp_path):
    code, out = _run(tmp_path, "tables", "--laws", "theta,uniform01", "--alpha",
                     "0.15,0.3,0.5,0.8,0.98", "--points", "11")
    assert code == 0
    files = sorted(p.name for p in (out / "tables").iterdir())
    assert files == sorted([f"theta_alpha{a}.csv" for a in (0.15, 0.3, 0.5, 0.8, 0.98)] + ["uniform01.csv"])
    rows = (out / "tables" / "uniform01.csv").read_text().splitlines()
    assert rows[0] == "x,pdf,cdf" and len(rows) == 12
    for line in rows[1:]:
        x, _, F = map(float, line.split(","))
        assert F == pytest.approx(x)
    half = np.loadtxt(out / "tables" / "theta_alpha0.5.csv", delimiter=",", skiprows=1)
    assert np.allclose(half[:, 2], 2 / np.pi * np.arcsin(half[:, 0]), atol=1e-9)
    assert main(["tables", "--alpha", "1.5", "--out", str(tmp_path / "t2")]) == 2


def test_half_alpha_run_has_closed_form_columns():
    cfg = default_config("dynkin-lamperti", alphas=[0.5], horizons=[2000], samples=4000, seed=1)
    rep = run(cfg)
    stats = {r["statistic"] for r in rep.rows}
    assert {"ks[theta vs arcsine]", "ks[delta vs cauchy]"} <= stats
    same = {r["statistic"]: r["value"] for r in rep.rows}
    # closed forms and quadrature CDFs give the same distance
    assert same["ks[theta vs arcsine]"] == pytest.approx(same["ks[theta vs theta]"], abs=1e-8)
    assert same["ks[delta vs cauchy]"] == pytest.approx(same["ks[delta vs delta]"], abs=1e-8)


def test_thaler_small_run_and_censoring():
    cfg = default_config("critical-thaler", horizons=[100], samples=200, cap=10**4, seed=2)
    rep = run(cfg)
    names = [r["statistic"] for r in rep.rows]
    assert "censored_fraction" in names and "P[log n/log V <= 0.5]" in names


def test_large_deviation_flags_reference_above_one():
    cfg = default_config("large-deviation", horizons=[20], samples=500, x_grid=[0.05], xy_grid=[])
    rep = run(cfg)
    row = next(r for r in rep.rows if r["statistic"] == "ratio[V_n/n > 0.05]")
    assert row["pass"] is False and "increase n" in row["error"]


def test_config_object_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "sigma", "nope": 1})
    with pytest.raises(ConfigError):
        default_config("dynkin-lamperti", map="farey").validate()
    with pytest.raises(ConfigError):
        default_config("sigma", samples=0).validate()
    with pytest.raises(ConfigError):
        default_config("magic")
