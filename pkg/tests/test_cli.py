import json
from pathlib import Path

import pytest

from lpp_duality import cli


def run_cli(args, out):
    return cli.main(args + ["--out", str(out)])


def read_bytes(outdir: Path, name: str) -> dict:
    runs = list(outdir.iterdir())
    assert len(runs) >= 1
    return {run.name: {f.name: f.read_bytes() for f in run.iterdir()}
            for run in runs}


def test_duality_run_and_determinism(tmp_path):
    args = ["duality", "--m", "2", "--n", "8", "--samples", "300",
            "--seed", "7", "--workers", "1"]
    assert run_cli(args, tmp_path / "a") == 0
    assert run_cli(args, tmp_path / "b") == 0
    # different worker count, same bytes
    args4 = args[:-1] + ["2"]
    assert run_cli(args4, tmp_path / "c") == 0
    a = read_bytes(tmp_path / "a", "duality.csv")
    b = read_bytes(tmp_path / "b", "duality.csv")
    c = read_bytes(tmp_path / "c", "duality.csv")
    (run_a,) = a.values()
    (run_b,) = b.values()
    (run_c,) = c.values()
    assert run_a["duality.csv"] == run_b["duality.csv"] == run_c["duality.csv"]
    manifest = json.loads(run_a["manifest.json"])
    assert manifest["config_hash"] in list(a)[0]
    assert manifest["master_seed"] == 7


def test_missing_flag_usage_error(tmp_path, capsys):
    rc = cli.main(["duality", "--m", "2", "--samples", "300", "--seed", "1",
                   "--out", str(tmp_path)])
    assert rc == 2
    assert not any(tmp_path.iterdir())


def test_bad_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        cli.main(["frobnicate"])
    assert err.value.code == 2


def test_validate_reports_violations(capsys):
    rc = cli.main(["validate", "duality", "--m", "8", "--n", "4",
                   "--samples", "50", "--seed", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "n > m" in out
    assert "samples" in out
    rc = cli.main(["validate", "duality", "--m", "2", "--n", "8",
                   "--samples", "200", "--seed", "1"])
    out = capsys.readouterr().out
    assert rc == 0 and "config ok" in out


def test_gate_failure_writes_failures_json(tmp_path):
    failures = []
    cli._gate(failures, "demo", 5.0, 1.0, False)
    rc = cli._emit("demo-cmd", type("A", (), {"out": str(tmp_path)})(),
                   {"seed": 1}, {"demo.csv": (["a"], [(1,)])}, failures, 0.0)
    assert rc == 1
    (run,) = tmp_path.iterdir()
    payload = json.loads((run / "failures.json").read_text())
    assert payload["failures"][0]["gate"] == "demo"
    assert (run / "demo.csv").read_text() == "a\n1\n"


def test_massfield_cli(tmp_path):
    rc = cli.main(["massfield", "--rho", "0.5", "--steps", "4", "--sites",
                   "2000", "--seed", "3", "--out", str(tmp_path)])
    assert rc == 0
    (run,) = tmp_path.iterdir()
    text = (run / "massfield.csv").read_text().splitlines()
    assert text[0] == "site,mass"
    assert len(text) == 2001


def test_treecheck_cli(tmp_path):
    rc = cli.main(["tree-check", "--m", "2", "--n", "8", "--window", "32",
                   "--samples", "40", "--seed", "11", "--workers", "2",
                   "--out", str(tmp_path)])
    assert rc == 0
    (run,) = tmp_path.iterdir()
    lines = (run / "treecheck.csv").read_text().splitlines()
    assert lines[0] == "replicate,lhs,rhs,stabilized,t_star"
    assert len(lines) == 41
