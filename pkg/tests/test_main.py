"""
命令行测试
"""
import json

import pytest

from framelab import __version__
from framelab.main import build_parser, main


def test_garland_json(capsys):
    assert main(["garland", "4", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "garland"
    assert data["parameters"] == {"n": "4", "q": "3"}
    assert data["version"] == __version__
    assert all(check["status"] == "pass" for check in data["checks"])


def test_refs_and_timings(capsys):
    assert main(["garland", "4", "3", "--refs", "--timings"]) == 0
    check = json.loads(capsys.readouterr().out)["checks"][0]
    assert check["ref"]
    assert "elapsed_seconds" in check


def test_csv_output(capsys):
    assert main(["count", "3", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "command,name,n,q,status,reason,ref,values"
    assert all(line.startswith("count,") for line in lines[1:])


def test_out_file(tmp_path):
    out = tmp_path / "nested" / "report.json"
    assert main(["count", "7", "3", "--euler-decomp", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    decomp = next(c for c in data["checks"] if c["name"] == "euler_decomp_poset")
    assert decomp["values"]["formula"] == "-507209080872632320"


def test_export(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRAMELAB_DATA_DIR", str(tmp_path))
    assert main(["walks", "3", "2", "--export"]) == 0
    capsys.readouterr()
    exported = sorted(p.name for p in (tmp_path / "exports").iterdir())
    assert exported == ["adjacency_n3_q2.mtx", "graph_n3_q2.edges"]


def test_instance_too_large(monkeypatch, capsys):
    monkeypatch.setenv("FRAMELAB_MAX_VERTICES", "50")
    assert main(["homology", "4", "3"]) == 3
    data = json.loads(capsys.readouterr().out)
    assert data["checks"][0]["status"] == "skipped"


@pytest.mark.parametrize("q", ["6", "1", "32"])
def test_invalid_field(q):
    assert main(["count", "3", q]) == 2


def test_invalid_configuration(monkeypatch):
    monkeypatch.setenv("FRAMELAB_PRIMES", "4,6")
    assert main(["count", "3", "2"]) == 2


def test_invalid_threads():
    assert main(["garland", "4", "3", "--threads", "0"]) == 2


@pytest.mark.parametrize(
    "argv",
    [["count", "1", "2"], ["count", "x", "2"], ["walks", "3"], ["unknown", "3", "2"], ["homology", "3", "2", "--torsion", "3"]],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_flags_are_per_command():
    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["count", "3", "2", "--max-dim", "2"])
    args = parser.parse_args(["homology", "3", "2", "--max-dim", "1", "--torsion", "2"])
    assert args.max_dim == 1
    assert args.torsion == "2"
    assert parser.parse_args(["verify-all"]).suite == "quick"
