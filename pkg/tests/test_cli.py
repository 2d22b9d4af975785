import csv
import io
import json
import subprocess
import sys

import pytest

from feec4d.cli import lattice_points, main, read_tabulation, tabulate
from feec4d.polycore import as_rational
from feec4d.refgeom import make_refcell


@pytest.fixture(autouse=True)
def serial(monkeypatch):
    monkeypatch.setenv("FEEC4D_THREADS", "1")
    monkeypatch.delenv("FEEC4D_CORRUPT", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_dims_pentatope(capsys):
    code, out, _ = run(capsys, "dims", "--cell", "pentatope", "--max-k", "2", "--format", "csv")
    assert code == 0
    row = next(r for r in csv_rows(out) if r["k"] == "1" and r["s"] == "2")
    assert (row["constructed"], row["formula"], row["status"]) == ("10", "10", "MATCH")


def test_dims_prism_lowest_order(capsys):
    code, out, _ = run(capsys, "dims", "--cell", "prism", "--max-k", "1", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert [r["constructed"] for r in rows] == [8, 16, 14, 6, 1]
    three = rows[3]
    assert three["trace"] == 6 and three["volume"] == 0
    assert all(r["volume"] >= 0 for r in rows)


def test_dims_text_table(capsys):
    code, out, _ = run(capsys, "dims", "--max-k", "1")
    assert code == 0
    assert out.splitlines()[0].split() == ["cell", "k", "s", "constructed", "formula", "trace", "volume", "status"]
    assert out.count("MATCH") == 10


def test_verify_unisolvency_determinants(capsys):
    code, out, _ = run(capsys, "verify", "--cell", "pentatope", "--checks", "unisolvency", "--max-k", "1")
    assert code == 0
    lines = [line for line in out.splitlines() if line.startswith("PASS")]
    assert len(lines) == 5
    dets = [line.split("det=")[1] for line in lines]
    assert dets == ["16", "-65536", "16384", "2048/243", "2/3"]


@pytest.mark.parametrize("argv", [
    ("verify", "--checks", "bogus"),
    ("verify", "--max-k", "5", "--allow-large"),
    ("verify", "--max-k", "4"),
    ("dims", "--max-k", "0"),
    ("tabulate", "-s", "0", "-k", "1"),
    ("tabulate", "-s", "1", "-k", "1", "--basis", "shape", "--lattice", "1"),
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_large_k_warns(capsys):
    code, out, err = run(capsys, "dims", "--cell", "pentatope", "--max-k", "4", "--allow-large", "--format", "csv")
    assert code == 0 and "warning" in err
    assert len(csv_rows(out)) == 20


def test_verify_report_is_deterministic(capsys, monkeypatch):
    argv = ("verify", "--all", "--max-k", "1", "--format", "json")
    first = run(capsys, *argv)
    monkeypatch.setenv("FEEC4D_THREADS", "3")
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == 0
    assert json.loads(first[1])["summary"]["failed"] == 0


def test_corrupted_coefficient_fails(capsys, monkeypatch):
    monkeypatch.setenv("FEEC4D_CORRUPT", "pentatope:2:2:3")
    code, out, _ = run(capsys, "verify", "--cell", "pentatope", "--max-k", "2", "--checks", "dims,exactness",
                       "--format", "json")
    assert code == 1
    failed = [r for r in json.loads(out)["records"] if r["status"] == "FAIL"]
    assert {(r["check"], r["k"]) for r in failed} == {("dims", 2), ("exactness", 2)}
    assert any("alternative=different" in r["witness"] for r in failed)


def test_tabulate_vertices_in_shape_basis(capsys, tmp_path):
    points = tmp_path / "points.json"
    points.write_text(json.dumps([[str(c) for c in v] for v in make_refcell("pentatope").vertices]))
    code, out, _ = run(capsys, "tabulate", "-s", "0", "-k", "1", "--basis", "shape", "--points", str(points))
    assert code == 0
    rows = json.loads(out)["rows"]
    table = [[0] * 5 for _ in range(5)]
    for n, row in enumerate(rows):
        table[n // 5][row["basis"]] = as_rational(row["values"][0])
    assert table == [[int(i == j) for j in range(5)] for i in range(5)]


def test_lattice_one_gives_identity(capsys):
    code, out, _ = run(capsys, "tabulate", "-s", "0", "-k", "1", "--basis", "shape", "--lattice", "1")
    assert code == 0
    rows = json.loads(out)["rows"]
    ones = [r for r in rows if r["values"] == ["1"]]
    assert len(rows) == 25 and len(ones) == 5
    assert len({r["basis"] for r in ones}) == 5


def test_top_form_at_centroid():
    centroid = make_refcell("pentatope").centroid()
    _, rows = tabulate("pentatope", 4, 2, [centroid])
    assert rows[0]["basis"] == 0 and rows[0]["values"] == ["1"]


def test_prism_two_forms_at_centroid():
    header, rows = tabulate("prism", 2, 1, [make_refcell("prism").centroid()])
    assert header["component_ordering"] == ["12", "13", "14", "23", "24", "34"]
    assert len(rows) == 14 and all(len(r["values"]) == 6 for r in rows)


def test_outside_point_reported(capsys, tmp_path):
    points = tmp_path / "points.json"
    points.write_text(json.dumps({"points": [[0, 0, 0, 0], ["-1/2", "-1/2", "-1/2", "-1/2"]]}))
    code, out, _ = run(capsys, "tabulate", "--cell", "prism", "-s", "0", "-k", "1", "--points", str(points))
    assert code == 1
    rows = json.loads(out)["rows"]
    assert rows[0]["error"] == "point outside the reference cell"
    assert len(rows) == 1 + 8


def test_tabulation_round_trip(capsys, tmp_path):
    target = tmp_path / "tab.json"
    code, _, _ = run(capsys, "tabulate", "--cell", "prism", "-s", "1", "-k", "1", "--lattice", "2",
                     "--out", str(target))
    assert code == 0
    header, rows = read_tabulation(target)
    points = []
    for r in rows:
        p = tuple(as_rational(x) for x in r["point"])
        if p not in points:
            points.append(p)
    again = tabulate(header["cell"], header["s"], header["k"], points)
    assert json.loads(json.dumps({"header": again[0], "rows": again[1]})) == {"header": header, "rows": rows}


def test_lattice_sizes():
    assert len(lattice_points("pentatope", 2)) == 15
    assert len(lattice_points("prism", 1)) == 8
    assert all(make_refcell("prism").contains(p) for p in lattice_points("prism", 3))


@pytest.mark.parametrize("cell, s, k, basis, det, size", [
    ("pentatope", 0, 1, "shape", "1", 5),
    ("prism", 4, 1, "space", "8/3", 1),
    ("pentatope", 1, 2, "space", None, 40),
])
def test_dof_matrix(capsys, cell, s, k, basis, det, size):
    code, out, _ = run(capsys, "dof-matrix", "--cell", cell, "-s", str(s), "-k", str(k), "--basis", basis)
    data = json.loads(out)
    assert code == 0
    assert data["rows"] == data["cols"] == size
    if det is not None:
        assert data["det"] == det
    assert data["det"] not in (None, "0")


def test_dof_matrix_csv_ends_with_det(capsys):
    code, out, _ = run(capsys, "dof-matrix", "-s", "4", "-k", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[-1] == "# det,2/3"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "feec4d", "verify", "--checks", "bogus"], capture_output=True,
                          text=True)
    assert proc.returncode == 2


@pytest.mark.parametrize("hook", ["bad", "pentatope:3:1:7", "cube:0:1:0", "prism:0:1:-1"])
def test_malformed_corruption_hook_is_usage_error(capsys, monkeypatch, hook):
    monkeypatch.setenv("FEEC4D_CORRUPT", hook)
    code, _, err = run(capsys, "verify", "--cell", "pentatope", "--max-k", "1", "--checks", "dims")
    assert code == 2
    assert "FEEC4D_CORRUPT" in err
