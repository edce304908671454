import csv
import io
import json

import pytest

from trotterbound.bounds import bound_closed
from trotterbound.cli import main, parse_grid
from trotterbound.models import LatticeSpec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_tj_interior(capsys):
    code, out, _ = run(capsys, "decompose", "--model", "tj", "--nx", "6", "--ny", "6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert sum(1 for r in rows if r["site_row"] == "2" and r["site_col"] == "3") == 64


def test_decompose_1d_weight(capsys):
    code, out, _ = run(capsys, "decompose", "--model", "hubbard", "--dim", "1", "--nx", "4", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and max(r["weight"] for r in rows) <= 3


def test_invalid_model_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decompose", "--model", "ising"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bound_worked_example(capsys):
    code, out, _ = run(capsys, "bound", "--model", "hubbard", "--nx", "6", "--t", "0.1", "--u", "10",
                       "--tau", "1", "--epsilon", "0.0004")
    data = json.loads(out)
    assert code == 0
    assert data["numeric_r"] == pytest.approx(1.3381e6, rel=1e-3)
    assert list(data) == sorted(data)


def test_bound_output_matches_library(capsys, tmp_path):
    path = tmp_path / "b.json"
    run(capsys, "bound", "--model", "tj", "--nx", "3", "--ny", "2", "--output", str(path))
    data = json.loads(path.read_text())
    assert data["polynomial_text"] == str(bound_closed("tj", LatticeSpec.square(3, 2)).polynomial)


@pytest.mark.parametrize("boundary", ["open", "periodic"])
def test_bound_all_agrees(capsys, boundary):
    code, out, _ = run(capsys, "bound", "--model", "tj", "--nx", "3", "--boundary", boundary, "--method", "all")
    data = json.loads(out)
    assert code == 0 and all(data["agreement"].values())


def test_sweep_columns(capsys):
    code, out, _ = run(capsys, "sweep", "--vary", "t", "--grid", "0.5,1", "--u", "1",
                       "--boundaries", "open,periodic", "--dims", "1,2", "--n-total")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["value", "hubbard_1d_open", "hubbard_1d_periodic", "hubbard_2d_open", "hubbard_2d_periodic"]
    assert len(rows) == 3


def test_sweep_u_over_t_with_derived_j(capsys):
    code, out, _ = run(capsys, "sweep", "--models", "hubbard,tj", "--vary", "u_over_t", "--grid", "1,10",
                       "--t", "0.1", "--j-derived")
    assert code == 0 and out.startswith("value,hubbard_2d_open,tj_2d_open\n")


def test_sweep_bad_grid(capsys):
    code, _, err = run(capsys, "sweep", "--vary", "t", "--grid", "1:2")
    assert code == 2 and "invalid grid" in err


def test_parse_grid():
    assert parse_grid("1:3:3") == [1.0, 2.0, 3.0]
    assert parse_grid("1:100:3:log") == pytest.approx([1, 10, 100])
    assert parse_grid("0.5, 2") == [0.5, 2.0]


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", "hubbard", "--dim", "1", "--nx", "2",
                       "--t", "1", "--u", "4", "--particles", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,eigenvalue,sector" and len(lines) == 7


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0 and "FAIL" not in out


def test_verify_detects_corrupted_golden(capsys, tmp_path):
    from importlib import resources
    text = resources.files("trotterbound.data").joinpath("table_hubbard.txt").read_text()
    bad = tmp_path / "bad.txt"
    bad.write_text(text.replace("1/4 U  | Z(0,0)\n", "1/2 U  | Z(0,0)\n"))
    code, out, _ = run(capsys, "verify", "--quick", "--golden-hubbard", str(bad))
    assert code == 1
    assert "[FAIL] golden table (hubbard)" in out and "Z(0,0)" in out


def test_missing_output_dir(capsys, tmp_path):
    code, _, err = run(capsys, "decompose", "--model", "hubbard", "--output", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and err
