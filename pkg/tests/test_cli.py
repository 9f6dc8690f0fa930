import csv
import io
import json
import math

import pytest

from cfgeom.cli import CONFIG_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_cf_eval(capsys):
    assert run(capsys, "cf", "eval", "--seq", "2,-1,3,-2,1")[:2] == (0, "0/1\n")
    code, out, _ = run(capsys, "cf", "eval", "--seq", "1,-2,2,-1/2,-4")
    assert out.strip() == "-1/1"
    code, out, _ = run(capsys, "cf", "eval", "--seq", "1,2,2", "--output", "json")
    assert json.loads(out) == {"p": "7", "q": "5"}


def test_cf_expand_and_continuants(capsys):
    assert run(capsys, "cf", "expand", "--x", "7/5")[1].strip() == "1,2,2"
    assert run(capsys, "cf", "expand", "--x", "7/5", "--parity", "even")[1].strip() == "1,2,1,1"
    assert run(capsys, "cf", "expand", "--x", "1.4")[1].strip() == "1,2,2"
    code, out, _ = run(capsys, "cf", "continuants", "--seq", "1,2,2")
    assert rows(out) == [["k", "P", "Q"], ["0", "1", "1"], ["1", "3", "2"], ["2", "7", "5"]]


def test_decimal_in_exact_mode_is_rejected(capsys):
    code, out, err = run(capsys, "cf", "eval", "--seq", "1.5,2", "--mode", "exact")
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and "exact" in err
    code, out, _ = run(capsys, "cf", "eval", "--seq", "1.5,2")
    assert code == 0 and float(out) == pytest.approx(2.0)


def test_sail_compute(capsys):
    code, out, _ = run(capsys, "sail", "compute", "--alpha", "7/5")
    assert code == 0
    assert rows(out) == [["x", "y"], ["1", "0"], ["1", "1"], ["5", "7"]]
    assert run(capsys, "sail", "compute", "--alpha", "7/5", "--lls")[1].strip() == "1,2,2"
    code, out, _ = run(capsys, "sail", "compute", "--alpha", "7/5", "--output", "json")
    data = json.loads(out)
    assert data["vertices"] == [[1, 0], [1, 1], [5, 7]] and data["lls"] == ["1", "2", "2"]
    assert run(capsys, "sail", "compute", "--alpha", "1/2")[0] == 2


def test_polyline_commands(capsys):
    assert run(capsys, "polyline", "closed", "--seq", "1,2,2")[1].strip() == "false"
    assert run(capsys, "polyline", "closed", "--seq", "2,-1,3,-2,1")[1].strip() == "true"
    code, out, _ = run(capsys, "polyline", "build", "--seq", "2,-1,3,-2,1")
    table = rows(out)
    assert table[0] == ["x", "y"] and table[1] == table[-1] == ["1", "0"]
    assert run(capsys, "polyline", "lls", "--points", "1,0;1,1;5,7")[1].strip() == "1,2,2"
    code, out, _ = run(capsys, "polyline", "endpoint", "--seq", "1,2,2")
    assert rows(out) == [["P", "Q"], ["7", "5"]]
    code, out, _ = run(capsys, "polyline", "transform", "--points", "1,0;1,1;5,7", "--matrix", "1,1;0,1")
    assert rows(out)[1:] == [["1", "0"], ["2", "1"], ["12", "7"]]


def test_polyline_input_file(capsys, tmp_path):
    path = tmp_path / "poly.csv"
    path.write_text("x,y\n1,0\n1,1\n5,7\n")
    assert run(capsys, "polyline", "lls", "--input", str(path))[1].strip() == "1,2,2"
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,0\n")
    assert run(capsys, "polyline", "lls", "--input", str(bad))[0] == 2


def test_domain_errors_exit_2(capsys):
    code, out, err = run(capsys, "polyline", "build", "--seq", "1,2,0")
    assert code == 2 and "2" in err and out == ""
    assert run(capsys, "polyline", "build", "--seq", "1,2")[0] == 2
    assert run(capsys, "cf", "eval", "--seq", "1/0")[0] == 2
    assert run(capsys, "density", "sample", "--preset", "ellipse_center", "--a", "1", "--b", "2")[0] == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["cf", "eval"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["nonsense"])
    capsys.readouterr()


def test_numerical_failure_exits_3(capsys, tmp_path):
    table = tmp_path / "a.csv"
    table.write_text("t,A\n" + "".join(f"{t / 100},{0.5 + 2 * t / 100}\n" for t in range(201)))
    code, out, err = run(capsys, "reconstruct", "run", "--table", str(table), "--r0", "1", "--branch", "-1",
                         "--step", "1e-3")
    assert code == 3 and "numerical" in err


def test_density_sample_csv(capsys):
    code, out, _ = run(capsys, "density", "sample", "--preset", "ellipse_center", "--a", "2", "--b", "1",
                       "--n", "8", "--periodic")
    table = rows(out)
    assert table[0] == ["t", "x", "y", "A", "B", "kappa"]
    assert len(table) == 9
    t, x, y, A, B, k = map(float, table[1])
    assert (t, x, y, A, B) == pytest.approx((0, 2, 0, 2, 0.5))
    code, out, _ = run(capsys, "density", "sample", "--preset", "log_spiral", "--spiral-b", "0.1", "--n", "5")
    for row in rows(out)[1:]:
        A, B = float(row[3]), float(row[4])
        assert A**3 * B == pytest.approx(1 / 1.01, rel=1e-12)


def test_density_other_commands(capsys):
    code, out, _ = run(capsys, "density", "discretize", "--preset", "ellipse_center", "--a", "2", "--b", "1",
                       "--n", "16")
    table = rows(out)
    assert table[0] == ["s0", "s1", "A_hat", "B_hat"] and len(table) == 17
    code, out, _ = run(capsys, "density", "sector", "--preset", "ellipse_center", "--a", "2", "--b", "1")
    assert float(out) == pytest.approx(2 * math.pi, rel=1e-12)
    code, out, _ = run(capsys, "density", "kepler-lambda", "--a", "1", "--b", "1")
    table = rows(out)
    assert table[0] == ["lambda", "length", "inverse_density_integral", "period"]
    assert float(table[1][3]) == pytest.approx(1.0, rel=1e-8)


def test_reconstruct_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "reconstruct", "roundtrip", "--preset", "line", "--a", "2", "--span", "3",
                       "--step", "1e-3")
    table = rows(out)
    assert table[0][0] == "error" and float(table[1][0]) < 1e-9
    target = tmp_path / "line.csv"
    code, out, _ = run(capsys, "reconstruct", "run", "--preset", "line", "--a", "2", "--span", "3",
                       "--step", "1e-2", "-o", str(target))
    assert code == 0 and out == ""
    table = rows(target.read_text())
    assert table[0] == ["t", "x", "y", "r", "phi", "branch"] and len(table) == 302
    assert all(abs(float(r[1]) - 2) < 1e-9 for r in table[1:])


def test_reconstruct_from_table(capsys, tmp_path):
    table = tmp_path / "a.csv"
    table.write_text("t,A\n0,2\n3,2\n")
    code, out, _ = run(capsys, "reconstruct", "run", "--table", str(table), "--r0", str(math.sqrt(5)),
                       "--phi0", str(math.atan2(1, 2)), "--step", "0.01")
    assert code == 0
    last = rows(out)[-1]
    assert (float(last[1]), float(last[2])) == pytest.approx((2.0, 4.0), abs=1e-9)
    assert run(capsys, "reconstruct", "run", "--table", str(table))[0] == 2


def test_config_file_and_environment(capsys, tmp_path, monkeypatch):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"output": "json", "tolerances": {"closure": 1e-3}}))
    code, out, _ = run(capsys, "polyline", "closed", "--seq", "2,-1,3,-2,1.0001", "--config", str(good))
    assert json.loads(out) is True
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    code, _, err = run(capsys, "cf", "eval", "--seq", "1", "--config", str(bad))
    assert code == 2 and "colour" in err
    monkeypatch.setenv(CONFIG_ENV, str(good))
    code, out, _ = run(capsys, "cf", "eval", "--seq", "1,2,2")
    assert json.loads(out) == {"p": "7", "q": "5"}
    # flags override the file
    assert run(capsys, "cf", "eval", "--seq", "1,2,2", "--output", "csv")[1].strip() == "7/5"
    monkeypatch.setenv(CONFIG_ENV, str(tmp_path / "missing.json"))
    assert run(capsys, "cf", "eval", "--seq", "1")[0] == 2


def test_tolerance_flags_are_validated(capsys):
    assert run(capsys, "cf", "eval", "--seq", "1", "--tol", "closure=-1")[0] == 2
    assert run(capsys, "cf", "eval", "--seq", "1", "--tol", "bogus=1")[0] == 2
    assert run(capsys, "cf", "eval", "--seq", "1", "--tol", "closure")[0] == 2


def test_repro_is_deterministic(capsys):
    code, first, _ = run(capsys, "paper", "repro", "--seed", "7")
    assert code == 0
    lines = first.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].startswith("10/10 passed")
    code, second, _ = run(capsys, "paper", "repro", "--seed", "7")
    strip_time = lambda text: text.rsplit(" in ", 1)[0]
    assert strip_time(first) == strip_time(second)
