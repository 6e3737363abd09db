import json
import math
import re

import numpy as np
import pytest

from steklovlab.errors import ConfigInvalid, IOFailure
from steklovlab.geometry import load_mesh, validate_mesh
from steklovlab.lab import (
    CSV_HEADER,
    ExperimentConfig,
    Row,
    RunReport,
    bound_verdict,
    emit_outputs,
    main,
    read_csv,
    render_svg,
    run_experiment,
    write_csv,
)


def small(name, **kw):
    base = dict(experiment=name, n_theta=64, n_radial=8, levels=3, k_max=4)
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "nope"})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "disk-validate", "bogus": 1})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "homogenise-converge", "teeth": [16, 8]})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "disk-validate", "n_theta": 0})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "annulus-validate", "r": 2.0, "R": 1.0})
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"teeth": [8]})


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "disk-validate", "n_theta": 128, "k_max": 3}))
    cfg = ExperimentConfig.load(path, n_theta=64, k_max=None)
    assert (cfg.n_theta, cfg.k_max) == (64, 3)
    assert cfg.rel_tol == 1e-3 and cfg.homogenise_rel_tol == 0.05
    with pytest.raises(IOFailure):
        ExperimentConfig.load(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.load(tmp_path / "bad.json")


def test_disk_validate_small_levels():
    rep = run_experiment(small("disk-validate", rel_tol=0.05))
    assert [r.n_theta for r in rep.rows if r.k == 0] == [16, 32, 64]
    errs = rep.extras["max_rel_err_per_level"]
    assert errs[0] > errs[1] > errs[2]
    assert rep.verdict("errors decrease per level").passed
    assert rep.verdict("kernel sigma_0").passed
    assert rep.verdict("sigma_bar_k <= 8 pi k").passed


def test_finest_level_verdict_can_fail():
    rep = run_experiment(small("disk-validate"))
    v = rep.verdict("finest level relative error")
    assert not v.passed and v.tolerance == 1e-3
    assert not rep.passed


def test_run_is_deterministic():
    a = run_experiment(small("annulus-validate", levels=2))
    b = run_experiment(small("annulus-validate", levels=2))
    strip = lambda rows: [(r.n_theta, r.k, r.sigma, r.sigma_bar, r.rel_err) for r in rows]
    assert strip(a.rows) == strip(b.rows)


def test_catenoid_weighted_small():
    rep = run_experiment(small("catenoid-weighted", rel_tol=0.05, n_theta=128, n_radial=16))
    assert rep.verdict("annulus vs cylinder oracle").passed
    k1 = [r for r in rep.rows if r.k == 1]
    assert all(r.target == pytest.approx(4 * math.pi / 1.1996786402577584, rel=1e-12) for r in k1)
    assert rep.verdict("normalised sigma_1 vs 4 pi / t1").passed


def test_homogenise_small(tmp_path):
    dump = tmp_path / "mesh.txt"
    rep = run_experiment(small("homogenise-converge", teeth=[4, 8], k_max=2, dump_mesh=str(dump)))
    assert sorted({r.teeth for r in rep.rows}) == [4, 8]
    assert all(v.passed for v in rep.verdicts if v.name.startswith(("hausdorff", "mesh topology")))
    assert rep.verdict("area loss <= C eps").value > 0.0
    mesh = load_mesh(dump)
    rep_mesh = validate_mesh(mesh, expected_components=2)
    assert rep_mesh.ok and rep_mesh.component_count == 2


def test_pairing_rows():
    rep = run_experiment(ExperimentConfig(experiment="pairing-decay", teeth=[8, 16, 32, 64, 128]))
    names = {r.experiment for r in rep.rows}
    assert names == {"pairing-decay:one", "pairing-decay:x", "pairing-decay:y"}
    assert len(rep.rows) == 15
    assert all(rep.extras[f"slope_{f}"] >= 0.9 for f in ("one", "x", "y"))


def make_row(**kw):
    d = dict(
        experiment="disk-validate",
        eps=None,
        teeth=None,
        n_theta=64,
        n_radial=8,
        k=1,
        sigma=1.0000123,
        sigma_bar=6.2832,
        target=1.0,
        rel_err=1.23e-5,
        residual=3e-15,
        wall_ms=12.5,
    )
    d.update(kw)
    return Row(**d)


def test_empty_report_csv(tmp_path):
    path = tmp_path / "out.csv"
    emit_outputs(RunReport(ExperimentConfig(experiment="disk-validate")), path)
    assert path.read_text() == CSV_HEADER + "\n"


def test_one_row_csv_exact(tmp_path):
    path = tmp_path / "out.csv"
    write_csv([make_row()], path)
    lines = path.read_text().splitlines()
    assert lines == [CSV_HEADER, "disk-validate,,,64,8,1,1.0000123,6.2832,1.0,1.23e-05,3e-15,12.5"]


def test_csv_round_trip(tmp_path):
    rows = [make_row(), make_row(experiment="homogenise-converge", eps=0.1 + 0.2, teeth=16, k=0, target=None, rel_err=None)]
    rows += [make_row(sigma=float(np.nextafter(1.0, 2.0)), sigma_bar=math.pi)]
    path = tmp_path / "out.csv"
    write_csv(rows, path)
    assert read_csv(path) == rows


def test_real_report_round_trip(tmp_path):
    rep = run_experiment(small("disk-validate", levels=2, csv=str(tmp_path / "d.csv")))
    assert read_csv(tmp_path / "d.csv") == rep.rows


def test_svg_counts_points_and_target():
    rep = RunReport(ExperimentConfig(experiment="homogenise-converge"))
    for n, v in zip([8, 16, 32, 64, 128], [4.6, 6.4, 8.0, 9.2, 9.8]):
        rep.rows += [make_row(experiment="homogenise-converge", teeth=n, k=0, sigma_bar=0.0, target=0.0)]
        rep.rows += [make_row(experiment="homogenise-converge", teeth=n, k=1, sigma_bar=v, target=10.47)]
    svg = render_svg(rep)
    assert len(re.findall(r"<circle", svg)) == 5
    assert len(re.findall(r"<line", svg)) == 1
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    # points sit at log-spaced abscissae
    xs = [float(x) for x in re.findall(r'<circle class="point" cx="([0-9.]+)"', svg)]
    assert np.allclose(np.diff(xs), np.diff(xs)[0], atol=0.02)


def test_emit_unwritable(tmp_path):
    with pytest.raises(IOFailure):
        emit_outputs(RunReport(ExperimentConfig(experiment="disk-validate")), tmp_path / "no" / "x.csv")


def test_bound_verdict_flags_violation():
    assert bound_verdict([make_row(k=1, sigma_bar=8 * math.pi - 1.0)], 1e-6).passed
    assert not bound_verdict([make_row(k=1, sigma_bar=8 * math.pi + 1e-3)], 1e-6).passed


def test_cli_exit_codes(tmp_path, capsys):
    csv_path = tmp_path / "a.csv"
    svg_path = tmp_path / "a.svg"
    args = ["--n-theta", "64", "--n-radial", "8", "--levels", "2", "--k-max", "2"]
    code = main(["disk-validate", *args, "--csv", str(csv_path), "--svg", str(svg_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] kernel sigma_0" in out
    assert csv_path.read_text().startswith(CSV_HEADER)
    assert len(re.findall(r"<circle", svg_path.read_text())) == 2

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "disk-validate", "rel_tol": 1e-9}))
    assert main(["disk-validate", "--config", str(cfg), *args]) == 1
    assert "[FAIL] finest level relative error" in capsys.readouterr().out
    assert main(["pairing-decay", "--teeth", "8,16,32"]) == 0
    assert main(["annulus-validate", "--r", "3", "--R", "2"]) == 2
