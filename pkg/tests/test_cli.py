import json
import shutil
import subprocess
import sys

import pytest

from rp3links import catalog
from rp3links.cli import run
from rp3links.diagram import parse_diagram, validate

SUBCOMMANDS = ["validate", "components", "invariants", "lift", "sl", "group", "simplify", "decide"]


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog():
    names = catalog.available()
    for required in ("unknot-affine", "rp1-chord", "unknot-two-passages", "trefoil-affine", "hopf-affine"):
        assert required in names
    for name in names:
        assert validate(catalog.load(name)).ok
    assert set(catalog.wall_free()) >= {"unknot-affine", "trefoil-affine", "hopf-affine"}
    with pytest.raises(KeyError):
        catalog.source("no-such-knot")


def test_fixtures_emit(capsys):
    code, out, _ = call(capsys, "fixtures", "emit", "rp1-chord")
    assert code == 0
    d = parse_diagram(out)
    assert d == catalog.load("rp1-chord")
    code, out, _ = call(capsys, "fixtures", "list", "--json")
    assert "rp1-chord" in json.loads(out)["fixtures"]


def test_decide_two_passage_unknot(capsys):
    code, out, _ = call(capsys, "decide", "@unknot-two-passages", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "AFFINE"
    assert data["certificate"]["type"] == "reduction"
    assert set(data) >= {"status", "certificate", "budget_used"}


def test_decide_exit_codes(capsys):
    assert call(capsys, "decide", "@rp1-chord")[0] == 3
    assert call(capsys, "decide", "@unknot-two-passages", "--moves-depth", "0", "--group-word-len", "0")[0] == 4


def test_invariants_chord(capsys):
    code, out, _ = call(capsys, "invariants", "@rp1-chord", "--json")
    data = json.loads(out)
    assert code == 0
    assert list(data["h1_class"].values()) == [1]
    assert data["bracket"] == {"poly": {"0": 1}, "epsilon": 1}


def test_sl_and_components(capsys):
    code, out, _ = call(capsys, "sl", "@2_1", "--json")
    assert code == 0 and list(json.loads(out)["sl"].values()) == [2]
    code, out, _ = call(capsys, "sl", "@rp1-chord", "--json")
    assert list(json.loads(out)["sl"].values()) == [None]
    code, out, _ = call(capsys, "components", "@unknot-two-passages", "--json")
    (comp,) = json.loads(out)["components"]
    assert comp["wall_passages"] == 2 and comp["h1_class"] == 0


def test_group_options(capsys):
    code, out, _ = call(capsys, "group", "@unknot-affine", "--abelianization", "--quotients", "2", "--find-order2", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["abelianization"] == {"rank": 1, "torsion": [2]}
    assert data["quotients"]["complete"]
    assert data["order2"]["witness"] == [["h", 1]]


def test_simplify_and_replay(capsys, tmp_path):
    code, out, _ = call(capsys, "simplify", "@unknot-two-passages", "--json")
    assert code == 0
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    code, out, _ = call(capsys, "replay", "@unknot-two-passages", str(cert))
    assert code == 0 and "ok" in out
    code, out, _ = call(capsys, "simplify", "@rp1-chord", "--depth", "2", "--nodes", "50")
    assert code == 2


def test_replay_order2_verdict(capsys, tmp_path):
    code, out, _ = call(capsys, "decide", "@unknot-two-passages", "--moves-depth", "0", "--json")
    assert json.loads(out)["certificate"]["type"] == "order2"
    cert = tmp_path / "verdict.json"
    cert.write_text(out)
    assert call(capsys, "replay", "@unknot-two-passages", str(cert))[0] == 0


def test_stdin_and_files(capsys, monkeypatch, tmp_path):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(catalog.source("hopf-affine")))
    code, out, _ = call(capsys, "components", "-")
    assert code == 0 and len(out.strip().splitlines()) == 2
    path = tmp_path / "bad.pld"
    path.write_text("boundary 2\nwall 0 head a\nwall 1 head a\n")
    code, out, _ = call(capsys, "validate", str(path), "--json")
    assert code == 2
    assert "CONTINUATION_MISMATCH" in [e["code"] for e in json.loads(out)["errors"]]


def test_errors(capsys, tmp_path):
    code, out, _ = call(capsys, "invariants", "@no-such-knot", "--json")
    assert code == 2 and "error" in json.loads(out)
    path = tmp_path / "junk.pld"
    path.write_text("boundary 0\nknot x\n")
    code, _, err = call(capsys, "invariants", str(path))
    assert code == 2 and "SYNTAX" in err


def test_usage_errors(capsys):
    for argv in ([], ["frobnicate"], ["decide"], ["decide", "@rp1-chord", "--moves-depth", "x"]):
        with pytest.raises(SystemExit) as exc:
            run(argv)
        assert exc.value.code == 1
        assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_json_and_determinism(capsys, sub):
    for name in catalog.available():
        first = call(capsys, sub, f"@{name}", "--json")
        second = call(capsys, sub, f"@{name}", "--json")
        assert first == second
        json.loads(first[1])


def test_console_script():
    exe = shutil.which("plink")
    cmd = [exe] if exe else [sys.executable, "-m", "rp3links.cli"]
    proc = subprocess.run(cmd + ["decide", "@rp1-chord"], capture_output=True, text=True)
    assert proc.returncode == 3
    assert proc.stdout.startswith("NOT_AFFINE")
