import io
import json
import subprocess
import sys

import pytest

from invsemi import io as sio
from invsemi.cli import main
from invsemi.munn import munn_semigroup

DATA = {name: str(sio.bundled_path(name)) for name in ("figure1.slt", "brandt5.sgp", "chain2.slt")}


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_validate_bundled_files():
    for path in DATA.values():
        code, out, _ = run("validate", path)
        assert code == 0 and json.loads(out)["valid"]


def test_validate_reports_associativity_witness(tmp_path):
    code, out, err = run("validate", write(tmp_path, "bad.sgp", "2\n1 0\n0 0\n"))
    assert code == 1
    assert json.loads(out)["witness"] == [0, 0, 1]
    assert "witness: [0, 0, 1]" in err


def test_validate_missing_file(tmp_path):
    assert run("validate", str(tmp_path / "nope.sgp"))[0] == 1


def test_munn_then_analyze_reproduces_figure1(monkeypatch):
    code, table, _ = run("munn", DATA["figure1.slt"])
    assert code == 0 and table.splitlines()[0] == "18"
    code, out, _ = run("analyze", "-", stdin=table, monkeypatch=monkeypatch)
    rep = json.loads(out)
    assert code == 0 and rep["order"] == 18 and rep["schema"] == 1
    flags = rep["flags"]
    assert flags["fundamental"] and flags["tightly_connected"]
    assert not flags["combinatorial"] and not flags["nontrivial_isolated_subgroups"]
    assert rep["green"]["D"]["sizes"] == [9, 8, 1]
    T = munn_semigroup(sio.parse_slt(sio.bundled_text("figure1.slt")))
    assert rep["labels"] == T.labels


def test_munn_small_semilattices(tmp_path):
    assert run("munn", DATA["chain2.slt"])[1].splitlines()[0] == "2"
    assert run("munn", write(tmp_path, "one.slt", "1\nmeet:\n0\n"))[1].splitlines()[0] == "1"
    assert run("munn", DATA["figure1.slt"], "--munn-cap", "3")[0] == 3


def test_analyze_brandt_with_bypass():
    code, out, _ = run("analyze", DATA["brandt5.sgp"], "--bypass", "0", "1", "--tight")
    rep = json.loads(out)
    assert rep["flags"]["combinatorial"]
    assert rep["bypass"] == {"x": 1, "chain": [0, 3], "stages": [0, 1], "tight": True}
    assert rep["monogenic"][1]["case"] == "incomparable"


def test_analyze_bypass_none_and_errors(tmp_path):
    # monogenic inverse semigroup whose kernel Z2 = {0, 3} lies below the generator 4
    table = "6\n0 0 0 3 3 3\n0 1 0 3 4 3\n0 0 2 3 3 5\n3 3 3 0 0 0\n3 3 4 0 0 1\n3 5 3 0 2 0\n"
    path = write(tmp_path, "mono6.sgp", table)
    rep = json.loads(run("analyze", path, "--bypass", "0", "4", "--tight")[1])
    assert rep["bypass"] == "none"
    assert not rep["flags"]["tightly_connected"] and not rep["flags"]["order_ideal"]
    rep = json.loads(run("analyze", path, "--bypass", "0", "4")[1])
    assert rep["bypass"]["chain"][0] == 0
    assert run("analyze", DATA["brandt5.sgp"], "--bypass", "3", "1")[0] == 1
    assert run("analyze", DATA["brandt5.sgp"], "--bypass", "0", "9")[0] == 1


def test_analyze_empty_semigroup(tmp_path):
    code, out, _ = run("analyze", write(tmp_path, "e.sgp", "0\n"))
    assert code == 0 and json.loads(out)["order"] == 0


def test_analyze_pretty():
    code, out, _ = run("analyze", DATA["chain2.slt"], "--pretty")
    assert code == 0 and "flags.fundamental: True" in out


@pytest.mark.parametrize("mode", ["iso", "lattice", "pa", "psa"])
def test_compare_brandt_with_itself(mode):
    code, out, _ = run("compare", DATA["brandt5.sgp"], DATA["brandt5.sgp"], "--mode", mode)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "verified"
    if mode == "iso":
        assert rep["isomorphic"]
    elif mode == "lattice":
        assert rep["isomorphic"] and rep["lattice_isomorphic"]
    else:
        assert rep["lhs"] and rep["rhs"]


@pytest.mark.parametrize("mode", ["iso", "lattice", "pa", "psa"])
def test_compare_chain_with_group(tmp_path, mode):
    z2 = write(tmp_path, "z2.sgp", "2\n0 1\n1 0\n")
    code, out, _ = run("compare", DATA["chain2.slt"], z2, "--mode", mode)
    rep = json.loads(out)
    assert code == 0
    if mode == "iso":
        assert not rep["isomorphic"]
    elif mode == "lattice":
        assert not rep["isomorphic"] and not rep["lattice_isomorphic"]
    else:
        assert not rep["lhs"] and not rep["rhs"]


def test_compare_cap_and_psa_non_inverse(tmp_path):
    code, out, _ = run("compare", DATA["brandt5.sgp"], DATA["brandt5.sgp"], "--mode", "pa",
                       "--pa-cap", "5")
    assert code == 3 and json.loads(out)["status"] == "inconclusive"
    rz = write(tmp_path, "rz.sgp", "2\n0 1\n0 1\n")
    assert run("compare", DATA["chain2.slt"], rz, "--mode", "psa")[0] == 0
    assert run("compare", DATA["chain2.slt"], rz, "--mode", "pa")[0] == 1


def test_catalog_command(tmp_path):
    code, out, _ = run("catalog", "--max-order", "2")
    data = json.loads(out)
    assert code == 0 and len(data["members"]) == 3 and data["schema"] == 1
    assert run("catalog", "--max-order", "2")[1] == out
    target = tmp_path / "cat.json"
    code, out, _ = run("catalog", "--max-order", "1", "--output", str(target))
    assert code == 0 and json.loads(target.read_text())["members"] == [
        {"order": 1, "table": [[0]], "inv": [0]}
    ]
    assert run("catalog", "--max-order", "7")[0] == 3
    assert run("catalog", "--max-order", "3", "--catalog-bound", "2")[0] == 3


def test_limits_file(tmp_path, monkeypatch):
    (tmp_path / "invsemi.env").write_text("# caps\nPA_CAP = 5\n")
    monkeypatch.chdir(tmp_path)
    args = ("compare", DATA["brandt5.sgp"], DATA["brandt5.sgp"], "--mode", "pa")
    assert run(*args)[0] == 3
    assert run(*args, "--pa-cap", "100")[0] == 0


def test_outputs_are_deterministic():
    args = ("compare", DATA["brandt5.sgp"], DATA["brandt5.sgp"], "--mode", "lattice")
    assert run(*args)[1] == run(*args)[1]
    assert run("analyze", DATA["figure1.slt"])[1] == run("analyze", DATA["figure1.slt"])[1]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "invsemi.cli", "validate", DATA["chain2.slt"]],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["order"] == 2
