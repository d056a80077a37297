from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from apexforest.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, cli_dispatch


def run(*argv, stdin: str | None = None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli_dispatch(list(argv), out)
    return code, out.getvalue()


K5 = "5 10\n" + "\n".join(f"{u} {v}" for u in range(1, 6) for v in range(u + 1, 6)) + "\n"


def test_census_json():
    code, text = run("census", "--n", "4", "--kmax", "1")
    assert code == EXIT_OK
    rows = json.loads(text)
    assert {"n": 4, "class": "ex2C", "k": 1, "count": "64"} in rows


def test_census_csv():
    code, text = run("--out", "csv", "census", "--n", "3", "--kmax", "0")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "n,class,k,count" and "3,forest,,7" in lines


def test_census_guard_exit():
    assert run("census", "--n", "9")[0] == EXIT_GUARD
    assert run("census", "--n", "8")[0] == EXIT_GUARD


def test_gf_pk():
    code, text = run("gf", "--pk", "4")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert len(lines) == 5
    got = [json.loads(line)["p"] for line in lines]
    assert [f"{p:.6f}" for p in got] == ["0.606531", "0.814600", "0.907879", "0.953998", "0.977005"]
    assert lines[1] == '{"k": 1, "p": 0.814600}'


def test_gf_constants_digits():
    code, text = run("gf", "--constants", "--digits", "20")
    assert code == EXIT_OK
    d = json.loads(text)
    assert f"{d['x']:.6f}" == "0.315411" and f"{d['r']:.6f}" == "0.230089"
    assert text.split('"gamma": ')[1].startswith("4.34614515")
    assert float(d["residual_spider"]) < 1e-25


def test_gf_usage_errors():
    assert run("gf")[0] == EXIT_USAGE
    assert run("gf", "--pk", "2", "--digits", "99")[0] == EXIT_USAGE


def test_classify_k5(tmp_path):
    path = tmp_path / "k5.txt"
    path.write_text(K5)
    code, text = run("classify", str(path))
    assert code == EXIT_OK
    assert json.loads(text) == {"member": True, "labels": ["K_TYPE"]}


def test_classify_stdin_witness(monkeypatch):
    code, text = run("classify", "--witness", stdin="4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n", monkeypatch=monkeypatch)
    d = json.loads(text)
    # K4 is both a wheel and a K_{3,1} with its left part joined up
    assert code == EXIT_OK and d["labels"] == ["WHEEL", "B_TYPE"]
    assert d["witness"]["hubs"] == [1, 2, 3, 4]


def test_classify_bad_input(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n1 9\n")
    assert run("classify", str(path))[0] == EXIT_USAGE
    assert run("classify", str(tmp_path / "missing.txt"))[0] == EXIT_USAGE


def test_sample_models():
    for model in ("tree", "forest", "apex", "exact-ex"):
        code, text = run("--seed", "5", "sample", "--model", model, "--n", "6", "--samples", "3", "--quiet")
        assert code == EXIT_OK
        rows = [json.loads(line) for line in text.splitlines()]
        assert [r["sample"] for r in rows] == [0, 1, 2]
    code, text = run("sample", "--model", "apex", "--n", "6", "--k", "2", "--out", "csv", "--quiet")
    assert text.splitlines()[0] == "sample,n,S,edges"


def test_sample_guard():
    assert run("sample", "--model", "exact-ex", "--n", "9")[0] == EXIT_GUARD


def test_series():
    code, text = run("series", "--class", "hairy-plus", "--max-n", "5")
    rows = json.loads(text)
    assert code == EXIT_OK and [r["count"] for r in rows[3:]] == ["8", "144", "2544"]
    assert rows[3]["coefficient"] == "4/3"
    assert run("series", "--class", "wheel", "--max-n", "0")[0] == EXIT_USAGE


def test_experiment_output_reproducible():
    argv = ("--seed", "9", "experiment", "connectivity", "--n", "60", "--k", "1", "--samples", "30")
    a, b = run(*argv), run(*argv)
    assert a == b and a[0] == EXIT_OK
    assert json.loads(a[1])["params"]["seed"] == "9"


def test_experiment_csv():
    code, text = run("experiment", "chi-omega", "--n", "30", "--k", "2", "--samples", "10", "--out", "csv")
    assert code == EXIT_OK and text.startswith("name,")


def test_flags_after_subcommand():
    a = run("--seed", "3", "sample", "--model", "tree", "--n", "5", "--quiet")
    b = run("sample", "--model", "tree", "--n", "5", "--seed", "3", "--quiet")
    assert a == b


def test_usage_errors():
    assert run()[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("census", "--bogus")[0] == EXIT_USAGE
    assert run("census", "--n", "4", "--workers", "0")[0] == EXIT_USAGE
    assert run("--seed", "-2", "sample", "--model", "tree", "--n", "3")[0] == EXIT_USAGE


def test_workers_env(monkeypatch):
    monkeypatch.setenv("APEXFOREST_WORKERS", "2")
    code, text = run("experiment", "connectivity", "--n", "40", "--samples", "8")
    assert code == EXIT_OK and json.loads(text)["params"]["workers"] == "2"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "apexforest", "gf", "--pk", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == '{"k": 0, "p": 0.606531}'
    proc = subprocess.run([sys.executable, "-m", "apexforest", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
