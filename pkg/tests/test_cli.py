import json

import pytest

from finalg.algebra import is_isomorphic, load
from finalg.catalog import a21
from finalg.cli import expand_macros, main
from finalg.terms import vn_pair


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_to_file(tmp_path, capsys):
    path = tmp_path / "a21.json"
    code, _, _ = run(capsys, "build", "a21", "-o", str(path))
    assert code == 0
    assert is_isomorphic(load(path), a21()) is not None


def test_build_sizes(capsys):
    code, out, _ = run(capsys, "build", "end-chain:3")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "ai-semiring" and len(doc["elements"]) == 10
    code, out, _ = run(capsys, "build", "sn:2")
    doc = json.loads(out)
    assert doc["kind"] == "inverse" and len(doc["elements"]) == 103


def test_check_identity_verdicts(capsys):
    code, out, _ = run(capsys, "check-identity", "a21", "x + x*x = x*x")
    assert code == 0 and out.startswith("Satisfied")
    code, out, _ = run(capsys, "check-identity", "end0-chain:3", "x + x*x = x*x")
    assert code == 1 and "x=(0,0,1)" in out


def test_check_identity_macro(capsys):
    code, out, _ = run(capsys, "--format", "machine", "check-identity", "sn:2", "v2 = v2'")
    doc = json.loads(out)
    assert code == 1 and doc["verdict"] == "counterexample"
    assert set(doc["counterexample"]) == {"x1", "x2", "x3", "x4"}


def test_expand_macros():
    v, w = vn_pair(3)
    assert expand_macros("v3 = v3'") == f"({'*'.join(v)}) = ({'*'.join(w)})"


@pytest.mark.parametrize("argv", [
    ["check-identity", "a21", "x + = y"],
    ["check-identity", "nowhere:3", "x = x"],
    ["check-identity", "brandt", "x + y = y + x"],
    ["--budget", "10", "check-identity", "end-chain:3", "x + y = y + x"],
    ["kadourek", "a21"],
    ["sn", "--n", "1"],
    ["verify-paper", "--only", "no-such-check"],
    ["verify-paper", "--n-max", "1"],
    ["frobnicate"],
    ["--jobs", "0", "green", "a21"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_green_machine(capsys):
    code, out, _ = run(capsys, "--format", "machine", "green", "end-chain:3")
    doc = json.loads(out)
    assert code == 0 and sorted(len(c) for c in doc["d_classes"]) == [1, 3, 6]


def test_kadourek(capsys):
    assert run(capsys, "kadourek", "brandt")[0] == 0
    code, out, _ = run(capsys, "kadourek", "sn:2")
    assert code == 1 and "unseparated" in out
    assert run(capsys, "kadourek", "sn:2", "--drop-dclass", "chi_2")[0] == 0
    assert run(capsys, "kadourek", "tn:3:2")[0] == 0


def test_sn_report(capsys):
    code, out, _ = run(capsys, "--format", "machine", "sn", "--n", "2", "--report")
    doc = json.loads(out)
    assert code == 0 and doc["size"] == 103
    assert doc["blocks"]["D"] == {"size": 81, "idempotents": 9}
    assert ["B1", "C"] in doc["covers"] and ["E", "D"] in doc["covers"]


def test_sn_verify(capsys):
    code, out, _ = run(capsys, "sn", "--n", "2", "--verify")
    assert code == 0 and "overall: PASS" in out


def test_verify_suite_only(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "brandt-divides-a21-square", "--no-timing")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("PASS")]
    assert len(lines) == 1 and "brandt-divides-a21-square" in lines[0]


def test_verify_suite_list(capsys):
    code, out, _ = run(capsys, "verify-paper", "--list")
    assert code == 0 and "tn-membership:3" in out
