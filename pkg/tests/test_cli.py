import json
import subprocess
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "assouad.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )
    return proc


def test_set_dim_command(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli(
        "set-dim", "--set", str(FIXTURES / "cantor.json"),
        "--kind", "upper", "--depth", "8", "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(out.read_text())
    assert report["command"] == "set-dim"
    assert 0.55 < report["estimate"]["value"] < 0.72


def test_report_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        proc = run_cli(
            "set-dim", "--set", str(FIXTURES / "cantor.json"),
            "--depth", "6", "--seed", "0", "--out", str(out),
        )
        assert proc.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_tree_command():
    proc = run_cli(
        "verify-tree", "--set", str(FIXTURES / "geometric.json"),
        "--s", "1/4", "--depth", "6",
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["passed"] is True
    assert report["failures"] == []


def test_build_tree_dump(tmp_path):
    dump = tmp_path / "tree.txt"
    proc = run_cli(
        "build-tree", "--set", str(FIXTURES / "points.json"),
        "--s", "1/5", "--depth", "4", "--dump", str(dump), "--out", str(tmp_path / "r.json"),
    )
    assert proc.returncode == 0
    lines = dump.read_text().strip().split("\n")
    assert lines[0].startswith("0\t-\t")
    for line in lines:
        assert len(line.split("\t")) == 6


def test_measure_dim_command():
    proc = run_cli(
        "measure-dim", "--measure", str(FIXTURES / "measure_geometric.json"),
        "--kind", "upper",
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert abs(report["estimate"]["value"] - 2.0) < 0.1


def test_classify_command():
    proc = run_cli("classify", "--measure", str(FIXTURES / "measure_dexp_bounded.json"))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["classification"]["case"] == "tail_ratios_bounded"
    assert report["classification"]["verdict"] == 0.0

    proc = run_cli("classify", "--measure", str(FIXTURES / "measure_dexp_atom.json"))
    assert json.loads(proc.stdout)["classification"]["case"] == "atom_at_limit"


def test_synth_command(tmp_path):
    out = tmp_path / "manifest.json"
    proc = run_cli(
        "synth", "--set", str(FIXTURES / "cantor.json"),
        "--s", "1/9", "--c", "1/3", "--C", "1", "--depth", "10",
        "--D", "6/5", "--dim-upper", "0.631", "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    manifest = json.loads(out.read_text())["manifest"]
    assert manifest["strategy"] in ("boundary", "splitting")
    assert manifest["paths"]


def test_exit_code_domain_error():
    proc = run_cli(
        "synth", "--set", str(FIXTURES / "cantor.json"),
        "--s", "1/9", "--c", "1/3", "--C", "1", "--depth", "8",
        "--D", "1/2", "--dim-upper", "0.631",
    )
    assert proc.returncode == 2
    assert "must exceed" in proc.stderr


def test_exit_code_calibration_error():
    # joint targets are infeasible at this coarse subdivision ratio
    proc = run_cli(
        "synth", "--set", str(FIXTURES / "cantor.json"),
        "--s", "1/9", "--c", "1/3", "--C", "1", "--depth", "6",
        "--D", "3/2", "--d", "3/10", "--epsilon", "1/20",
    )
    assert proc.returncode == 3


def test_exit_code_inconclusive():
    proc = run_cli(
        "classify", "--measure", str(FIXTURES / "measure_dexp_bounded.json"),
        "--n-max", "3",
    )
    assert proc.returncode == 4


def test_malformed_inputs(tmp_path):
    missing = run_cli("set-dim", "--set", str(tmp_path / "nope.json"))
    assert missing.returncode == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("set-dim", "--set", str(bad)).returncode == 2

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"type": "martian"}))
    assert run_cli("set-dim", "--set", str(wrong)).returncode == 2


def test_dump_csv(tmp_path):
    csv_path = tmp_path / "scan.csv"
    proc = run_cli(
        "set-dim", "--set", str(FIXTURES / "cantor.json"),
        "--depth", "6", "--dump-csv", str(csv_path),
    )
    assert proc.returncode == 0
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0].startswith("kind,")
    assert len(lines) > 1


def test_mixture_measure_loads():
    proc = run_cli(
        "measure-dim", "--measure", str(FIXTURES / "measure_atom_mixture.json"),
        "--kind", "lower", "--depth", "6",
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["estimate"]["value"] < 0.05
