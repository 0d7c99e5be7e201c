import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from irrarray import cli
from irrarray.tiling import read_configs

SMALL = "tx: {rows: 4, cols: 4}\narrays: {dtpa: {kind: domino}, thin: {kind: thinned, S: 8}}\nn_realizations: 4\n"


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.yaml"
    p.write_text(SMALL)
    return p


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_count(capsys):
    assert run(["count", "domino", 6, 6], capsys)[1].split() == ["6728"]
    code, out, _ = run(["count", "thinned", 8, 8, 16, "--sci"], capsys)
    assert out.split()[1] == "3.3e14"
    assert run(["count", "thinned", 2, 2, 4], capsys)[1].strip() == "1"
    assert run(["count", "thinned", 2, 2], capsys)[0] == 2


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "d.ndjson"
    assert run(["enumerate", "domino", 2, 3, "--cap", 10, "-o", out], capsys)[0] == 0
    assert len(out.read_text().splitlines()) == 3
    code, text, _ = run(["enumerate", "tetromino", 2, 2], capsys)
    assert code == 0 and len(text.splitlines()) == 1
    code, _, err = run(["enumerate", "domino", 1, 1], capsys)
    assert code == 2 and "error" in err


def test_sample(tmp_path, capsys):
    out = tmp_path / "t.ndjson"
    assert run(["sample", 8, 10, 40, "--count", 3, "--seed", 5, "-o", out], capsys)[0] == 0
    cfgs = read_configs(out)
    assert [c.config_index for c in cfgs] == [0, 1, 2] and all(c.S == 40 for c in cfgs)
    assert run(["sample", 3, 3, 1], capsys)[0] == 2


def test_usage_errors(small, capsys):
    assert run(["evaluate", small, "--architectures", "FD,XYZ"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_evaluate_report(small, tmp_path, capsys):
    out = tmp_path / "o"
    code, text, _ = run(["evaluate", small, "--output-dir", out, "--n-realizations", 2], capsys)
    assert code == 0 and "sum SE" in text
    rep = json.loads((out / "report.json").read_text())
    assert rep["eta_dB"] == 5.0 and len(rep["seeds"]) == 2
    assert {r["architecture"] for r in rep["results"]} == {"FD", "HFC", "HPC"}
    for r in rep["results"]:
        assert r["mean_sum_se"] > 0 and r["mean_sll_dB"] <= 0
        assert len(r["realizations"]) == 2
    rows = read_csv(out / "report.csv")
    assert len(rows) == 6
    for row in rows:
        assert np.isfinite(float(row["mean_sum_se"])) and np.isfinite(float(row["mean_sll_dB"]))


def test_evaluate_config_file(small, tmp_path, capsys):
    cfg = tmp_path / "c.ndjson"
    run(["enumerate", "domino", 4, 4, "--cap", 2, "-o", cfg], capsys)
    out = tmp_path / "o"
    code, _, _ = run(["evaluate", small, "--configs", cfg, "--architectures", "FD", "--output-dir", out,
                      "--n-realizations", 1], capsys)
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert [r["label"] for r in rep["results"]] == ["c[0]", "c[1]"]


def test_evaluate_deterministic(small, tmp_path, capsys):
    args = ["evaluate", small, "--n-realizations", 1, "--seed", 9]
    run(args + ["--output-dir", tmp_path / "a"], capsys)
    run(args + ["--output-dir", tmp_path / "b"], capsys)
    assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()


def test_degenerate_exit_code(small, tmp_path, capsys, monkeypatch):
    import irrarray.optimizer as opt
    from irrarray.errors import DegenerateChannelError

    real = opt.build_precoder
    calls = {"n": 0}

    def flaky(*a, **k):
        calls["n"] += 1
        if calls["n"] % 2:
            raise DegenerateChannelError("singular")
        return real(*a, **k)

    monkeypatch.setattr(opt, "build_precoder", flaky)
    code, _, err = run(["evaluate", small, "--architectures", "FD", "--output-dir", tmp_path, "--n-realizations", 4], capsys)
    assert code == 3 and "degenerate" in err


def test_optimize(small, tmp_path, capsys):
    out = tmp_path / "opt"
    code, text, _ = run(["optimize", small, "--kind", "dtpa", "--beta", 0.5, "--i-max", 20, "--exhaustive",
                         "--output-dir", out], capsys)
    assert code == 0
    res = json.loads((out / "result.json").read_text())
    assert res["space_size"] == 36 and res["chromosome_bits"] == 6
    assert res["objective"] <= res["exhaustive_best_objective"]
    best = read_configs(out / "best_config.json")[0]
    assert best.kind == "domino" and best.config_index == res["best_index"]
    trace = read_csv(out / "trace.csv")
    f = [float(r["best_fitness"]) for r in trace]
    assert len(f) == 21 and all(b >= a for a, b in zip(f, f[1:]))


def test_optimize_i_max_zero_and_thinned(small, tmp_path, capsys):
    out = tmp_path / "z"
    assert run(["optimize", small, "--kind", "thin", "--beta", 1, "--i-max", 0, "--output-dir", out], capsys)[0] == 0
    res = json.loads((out / "result.json").read_text())
    assert res["generations"] == 0 and res["evaluations"] == 20


def test_optimize_beta_extremes(small, tmp_path, capsys):
    best = {}
    for beta in (0, 1):
        out = tmp_path / f"b{beta}"
        run(["optimize", small, "--kind", "dtpa", "--beta", beta, "--i-max", 30, "--exhaustive", "--output-dir", out], capsys)
        best[beta] = json.loads((out / "result.json").read_text())["exhaustive_best_index"]
    assert best[0] != best[1]


def test_sweep(small, tmp_path, capsys):
    out = tmp_path / "sw.csv"
    code, _, _ = run(["sweep", small, "--n-realizations", 20, "--eta", -10, 0, 10, 20, "--architectures", "FD,HPC",
                      "-o", out], capsys)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 2 * 2 * 4
    curves = {}
    for r in rows:
        for k in ("eta_dB", "mean_sum_se", "ci95_sum_se"):
            assert np.isfinite(float(r[k]))
        curves.setdefault((r["label"], r["architecture"]), []).append((float(r["eta_dB"]), float(r["mean_sum_se"]), float(r["ci95_sum_se"])))
    for c in curves.values():
        se = [x[1] for x in sorted(c)]
        assert all(b >= a for a, b in zip(se, se[1:]))
    for (fd, hpc) in zip(sorted(curves[("dtpa", "FD")]), sorted(curves[("dtpa", "HPC")])):
        assert fd[1] + fd[2] >= hpc[1]


def test_sweep_empty_eta(small, tmp_path, capsys):
    out = tmp_path / "e.csv"
    assert run(["sweep", small, "--eta", "-o", out], capsys)[0] == 0
    assert out.read_text().splitlines() == ["label,kind,architecture,eta_dB,mean_sum_se,ci95_sum_se,n_ok"]


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "irrarray.cli", "count", "domino", "2", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "3"
