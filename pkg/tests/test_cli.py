import json
import subprocess
import sys

import pytest

from bordered_moduli.cli import run
from bordered_moduli.strata import StratumGraph, enumerate_strata
from bordered_moduli.surface_types import MarkedTopType


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_strata_json(capsys):
    code, out, _ = call(capsys, "strata", "--g", "0", "--h", "3", "--n", "0", "--m", "0,0,0", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["counts"] == [1, 9, 21, 14] and report["total"] == 45


def test_strata_graphs_round_trip(capsys):
    code, out, _ = call(capsys, "strata", "--g", "1", "--h", "1", "--graphs", "--poset", "--format", "json")
    assert code == 0
    report = json.loads(out)
    en = enumerate_strata(MarkedTopType.of(1, 1))
    decoded = [StratumGraph.from_dict({k: v for k, v in d.items() if k != "id"}) for d in report["strata"]]
    assert [s.key for s in decoded] == [s.key for s in en]
    assert len(report["covers"]) == sum(len(v) for v in en.covers.values())


def test_strata_csv_and_dot(capsys, tmp_path):
    dot = tmp_path / "p.dot"
    code, out, _ = call(capsys, "strata", "--g", "0", "--h", "2", "--m", "2,0", "--format", "csv", "--dot", str(dot))
    assert code == 0
    assert len(out.strip().splitlines()) == 1 + 11
    assert dot.read_text().startswith("digraph strata")


def test_invariant(capsys):
    code, out, _ = call(capsys, "invariant", "--g", "0", "--h", "1", "--d", "3", "--n", "3", "--a", "1")
    assert code == 0 and "value: 1/9" in out
    code, out, _ = call(capsys, "invariant", "--g", "1", "--h", "1", "--d", "1", "--n", "1", "--a", "1", "--format", "json")
    assert json.loads(out)["value"] == "1/24"


def test_invariant_table(capsys):
    code, out, _ = call(capsys, "invariant", "--g", "0", "--h", "2", "--d", "3", "--n", "1,2", "--table", "-2..3", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["sign_symmetry"] and len(report["rows"]) == 6
    assert all("/" in r["value"] for r in report["rows"])
    code, out, _ = call(capsys, "invariant", "--g", "0", "--h", "2", "--d", "3", "--n", "1,2", "--table", "0..1", "--format", "csv")
    assert out.splitlines()[0] == "g,h,d,n,a,value"


def test_vdim_dim_index(capsys):
    code, out, _ = call(capsys, "vdim", "--mu", "0", "--N", "3", "--g", "2", "--h", "2", "--n", "0", "--m", "0,0", "--format", "json")
    assert code == 0 and json.loads(out)["virtual_dim"] == 0
    code, out, _ = call(capsys, "dim", "--g", "0", "--h", "3", "--format", "json")
    assert json.loads(out)["moduli_dim"] == 3
    code, out, _ = call(capsys, "index", "--mu", "0", "--N", "3", "--gtilde", "2", "--format", "json")
    assert json.loads(out)["fredholm_index"] == -3
    code, out, _ = call(capsys, "index", "--mu", "4", "--N", "1", "--g", "0", "--h", "1", "--format", "json")
    assert json.loads(out)["fredholm_index"] == 5


def test_classify(capsys):
    code, out, _ = call(capsys, "classify", "--gtilde", "2", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["count"] == 5
    assert {(t["h"], t["k"]) for t in report["types"]} == {(1, 0), (3, 0), (0, 1), (1, 1), (2, 1)}


def test_pants(capsys):
    code, out, _ = call(capsys, "pants", "--check-k5", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["isomorphic"] and report["k5_f_vector"] == [14, 21, 9, 1]
    code, out, _ = call(capsys, "pants", "--gtilde", "2", "--format", "json")
    assert json.loads(out)["curves"] == 3


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["invariant", "--g", "0", "--h", "1", "--d", "3", "--n", "2", "--a", "1"], "d=3"),
        (["strata", "--g", "0", "--h", "2"], "(0,2)"),
        (["dim", "--g", "-1", "--h", "1"], "g"),
        (["index", "--mu", "1", "--N", "1", "--g", "0", "--h", "1"], "mu"),
        (["verify-gluing", "--r-list", "0.5"], "t"),
        (["invariant", "--g", "2", "--h", "1", "--d", "1", "--n", "1", "--a", "1"], "g=2"),
        (["nonsense"], "invalid choice"),
        (["strata", "--g", "0", "--h", "3", "--bogus"], "bogus"),
        (["classify"], "gtilde"),
    ],
)
def test_domain_errors_exit_2(capsys, argv, needle):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("error:") and needle in err


def test_deterministic_output(capsys):
    argv = ["strata", "--g", "0", "--h", "2", "--m", "1,1", "--graphs", "--poset", "--format", "json"]
    _, a, _ = call(capsys, *argv)
    enumerate_strata.cache_clear()
    _, b, _ = call(capsys, *argv)
    assert a == b


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = call(capsys, "dim", "--g", "1", "--h", "1", "--format", "json", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["moduli_dim"] == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bordered_moduli", "invariant", "--g", "0", "--h", "1", "--d", "3", "--n", "3", "--a", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "1/9" in proc.stdout
