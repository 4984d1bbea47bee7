from __future__ import annotations

import json
import subprocess
import sys

from altnu.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from altnu.paths import count_nu_dyck


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lattice_sizes(capsys):
    code, out, _ = run(capsys, "lattice", "--nu", "(1,2,0)", "--delta", "(0,0)")
    data = json.loads(out)
    assert code == EXIT_OK and data["size"] == count_nu_dyck((1, 2, 0)) and data["schema"] == 1
    code, out, _ = run(capsys, "lattice", "--nu", "NENENENE", "--delta", "tamari")
    assert json.loads(out)["size"] == 14


def test_lattice_formats(capsys):
    code, out, _ = run(capsys, "lattice", "--nu", "(0,1,1,1)", "--format", "dot")
    assert code == EXIT_OK and out.startswith("digraph")
    code, out, _ = run(capsys, "lattice", "--nu", "(0,1,1,1)", "--format", "csv")
    assert out.splitlines()[0] == "lower,upper,box_row,box_col"
    code, out, _ = run(capsys, "lattice", "--nu", "(0,1,1,1)", "--format", "ascii")
    assert "5 elements" in out


def test_invalid_delta_names_index(capsys):
    code, _, err = run(capsys, "lattice", "--nu", "(0,1,1)", "--delta", "(1,2)")
    assert code == EXIT_USAGE
    assert "2" in err and "delta" in err


def test_usage_errors(capsys):
    assert run(capsys, "lattice")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "lattice", "--nu", "(0,x)")[0] == EXIT_USAGE
    assert run(capsys, "lattice", "--nu", "(0,1,1,1,1,1)", "--max-elements", "5")[0] == EXIT_USAGE
    assert run(capsys, "table1", "--format", "dot")[0] == EXIT_USAGE


def test_complex_dyck4(capsys):
    code, out, _ = run(capsys, "complex", "--nu", "NENENENE", "--delta", "dyck")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["euler"] == 1 and data["betti_gf2"] == [2, 1] == data["betti_shelling"]
    assert data["isomorphism"]["ok"]


def test_complex_table_entry(capsys):
    code, out, _ = run(capsys, "complex", "--nu", "(0,3,3,3,3)", "--delta", "tamari", "--mode", "plain")
    data = json.loads(out)
    assert data["betti_gf2"] == [1, 8, 14] == data["betti_shelling"]


def test_complex_csv_and_ascii(capsys):
    code, out, _ = run(capsys, "complex", "--nu", "(0,2,2,2)", "--format", "csv")
    assert out.startswith("position,size,a_sequence")
    code, out, _ = run(capsys, "complex", "--nu", "(0,2,2,2)", "--format", "ascii", "--rational")
    assert "iso=ok" in out


def test_complex_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ALTNU_CACHE_DIR", str(tmp_path))
    first = run(capsys, "complex", "--nu", "(0,2,1,2)", "--delta", "(1,0,0)")[1]
    assert list(tmp_path.iterdir())
    second = run(capsys, "complex", "--nu", "(0,2,1,2)", "--delta", "(1,0,0)")[1]
    assert first == second


def test_table1_rows(capsys):
    code, out, _ = run(capsys, "table1", "--m-min", "2", "--m-max", "2", "--n-min", "5", "--n-max", "5")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and lines[0].startswith("m,n,lattice")
    dyck = [l for l in lines if ",dyck," in l][0]
    assert "2 8 15 1" in dyck and dyck.endswith("ok")
    code, out, _ = run(capsys, "table1", "--m-min", "7", "--m-max", "7", "--n-min", "3", "--n-max", "3",
                       "--format", "json", "--lattice")
    rows = json.loads(out)["rows"]
    assert {r["lattice"] for r in rows} == {"tamari", "dyck"}
    assert all(r["gf2"] == [2, 51] == r["shelling"] == r["lattice_gf2"] for r in rows)


def test_verify_single_and_all(capsys):
    code, out, _ = run(capsys, "verify", "--nu", "(0,2,2,2)", "--delta", "all", "--format", "ascii")
    assert code == EXIT_OK and out.strip().endswith("27/27 passed")
    code, out, _ = run(capsys, "verify", "--nu", "(0,2,2,2)", "--delta", "dyck")
    data = json.loads(out)
    assert data["ok"] and "top_spheres" in data["reports"][0]["checks"]


def test_verify_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--sweep", "1", "--max-run", "2", "--format", "ascii")
    assert code == EXIT_OK and "FAIL" not in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "altnu.cli", "lattice", "--nu", "(0,1,1)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["size"] == 2


def test_golden_mismatch_exits_1(capsys, monkeypatch):
    from altnu import table1

    monkeypatch.setitem(table1.GOLDEN, (2, 3), {"tamari": (2, 2), "dyck": (2, 1)})
    code, out, err = run(capsys, "table1", "--m-min", "2", "--m-max", "2", "--n-min", "3", "--n-max", "3")
    assert code == EXIT_FAIL
    assert "MISMATCH" in out and "mismatch" in err
