import json

import pytest

from fepmix import cli
from fepmix.io import read_csv


def run(*argv):
    return cli.run([str(a) for a in argv])


def test_verify_suite_passes(tmp_path, capsys):
    assert run("verify", "--max-n", 12, "--out", tmp_path) == 0
    checks = json.loads((tmp_path / "verify.json").read_text())["checks"]
    assert all(c["ok"] for c in checks)
    assert (tmp_path / "manifest.json").is_file()


def test_verify_reports_failure(tmp_path, monkeypatch):
    import fepmix.exact as ex

    monkeypatch.setattr(ex, "fep_sep_error", lambda N, k, p: 1.0)
    assert run("verify", "--max-n", 5, "--out", tmp_path) == 1


def test_exact_tv(tmp_path, capsys):
    code = run("exact", "tv", "--family", "fep-seg", "--n", 4, "--k", 3, "--p", 0.5, "--eps", 0.25,
               "--out", tmp_path)
    assert code == 0
    assert "T(0.25) = 2.7734375" in capsys.readouterr().out
    rows, comments = read_csv(tmp_path / "tv_curve.csv")
    d = [float(r["d"]) for r in rows]
    assert all(a >= b for a, b in zip(d, d[1:]))
    assert any(c.startswith("T_eps=") for c in comments)


def test_exact_other_analyses(tmp_path):
    assert run("exact", "stationary", "--family", "zrp-const", "--n", 3, "--m", 2, "--p", 0.7,
               "--out", tmp_path / "a") == 0
    assert run("exact", "gap", "--family", "fep-circle", "--n", 8, "--k", 6, "--out", tmp_path / "b") == 0
    assert run("exact", "aldous-brown", "--n", 3, "--m", 3, "--p", 0.7, "--out", tmp_path / "c") == 0
    assert run("exact", "ensembles", "--out", tmp_path / "d") == 0


def test_config_file_and_unknown_keys(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"analysis": "tv", "n": 5, "k": 4, "eps": 0.3}))
    assert run("exact", "--config", cfg, "--out", tmp_path / "o") == 0
    man = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert man["config"]["n"] == 5 and man["command"] == "exact"
    cfg.write_text(json.dumps({"analysis": "tv", "bogus": 1}))
    assert run("exact", "--config", cfg, "--out", tmp_path / "p") == 2


def test_bad_arguments_exit_2(tmp_path):
    assert run("exact", "tv", "--n", 8, "--k", 3, "--out", tmp_path) == 2
    assert run("nonsense") == 2
    assert run("sweep", "unknown-kind", "--out", tmp_path) == 2
    assert run("exact", "tv", "--eps", 1.5, "--out", tmp_path) == 2


def test_plotdata_errors(tmp_path):
    assert run("plotdata", "--results", tmp_path / "missing", "--out", tmp_path / "x") == 2
    assert run("plotdata", "--out", tmp_path / "y") == 2
    empty = tmp_path / "empty"
    assert run("exact", "tv", "--points", 0, "--out", empty) == 0
    assert run("plotdata", "--results", empty, "--out", tmp_path / "z") == 2


def test_plotdata_afep(tmp_path):
    src = tmp_path / "sweep"
    assert run("sweep", "afep-slope", "--gaps", "3,4,5", "--reps", 10, "--out", src) == 0
    out = tmp_path / "plot"
    assert run("plotdata", "--results", src, "--out", out) == 0
    rows, comments = read_csv(out / "log_hitting_vs_gap.csv")
    assert list(rows[0]) == ["gap", "log_mean"]
    assert any(c.startswith("slope=") for c in comments)
    assert (out / "log_hitting_vs_gap.svg").read_text().startswith("<svg")


def test_plotdata_tv(tmp_path):
    src = tmp_path / "tv"
    assert run("exact", "tv", "--out", src) == 0
    assert run("plotdata", "--results", src, "--out", tmp_path / "p") == 0
    rows, _ = read_csv(tmp_path / "p" / "tv_decay.csv")
    d = [float(r["d"]) for r in rows]
    assert all(a >= b for a, b in zip(d, d[1:]))


def test_simulate_and_hit(tmp_path):
    assert run("simulate", "--family", "segment", "--n", 10, "--k", 7, "--T", 20, "--out", tmp_path / "s") == 0
    assert (tmp_path / "s" / "trajectory.csv").read_text().startswith("t,coord,value")
    assert run("simulate", "--family", "circle", "--start", "block", "--n", 10, "--k", 7,
               "--out", tmp_path / "c") == 0
    assert run("simulate", "--family", "obep", "--n", 5, "--q", 0.3, "--out", tmp_path / "o") == 0
    assert run("hit", "--family", "circle", "--start", "block", "--n", 16, "--k", 12, "--reps", 8,
               "--out", tmp_path / "h") == 0
    rows, _ = read_csv(tmp_path / "h" / "samples.csv")
    assert len(rows) == 8


def test_output_root_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ROOT_ENV, str(tmp_path))
    assert run("exact", "gap") == 0
    assert (tmp_path / "exact-gap" / "summary.json").is_file()


def test_rerun_from_manifest_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("hit", "--n", 12, "--k", 8, "--p", 0.7, "--reps", 20, "--seed", 9, "--out", a) == 0
    assert run("hit", "--config", a / "manifest.json", "--out", b) == 0
    for name in ("samples.csv", "summary.json", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
