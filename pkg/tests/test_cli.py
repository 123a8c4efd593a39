import csv
import io
import json

import pytest

from sp4hecke.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main, render
from sp4hecke.suites import Row


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_levi_json(capsys):
    code, out = run(capsys, "levi", "--max-rank", "3")
    data = json.loads(out)
    assert code == EXIT_PASS
    assert data["summary"]["failed"] == 0
    assert set(data) == {"config", "rows", "summary"}
    assert set(data["rows"][0]) == {"anchor", "computed", "expected", "abs_error", "pass"}


def test_gauss_suite_deterministic(capsys):
    args = ("verify", "--suite", "gauss", "--mu", "legendre", "--prime", "5")
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == EXIT_PASS
    assert out1 == out2
    assert json.loads(out1)["config"]["prime"] == 5


def test_csv_output_to_file(tmp_path, capsys):
    path = tmp_path / "report.csv"
    code, out = run(capsys, "verify", "--suite", "gauss", "--format", "csv", "--out", str(path))
    assert code == EXIT_PASS and out == ""
    rows = list(csv.DictReader(path.open()))
    assert rows and rows[0]["pass"] == "True"


def test_failing_identity_exit_code(capsys):
    # f_alpha^2 at p = 3 with Legendre mu disagrees with the closed form
    code, out = run(capsys, "verify", "--suite", "structure", "--case", "GL2", "--mu", "legendre")
    assert code == EXIT_FAIL
    assert json.loads(out)["summary"]["failed"] == 1


@pytest.mark.parametrize("argv", [
    ("verify", "--prime", "4"),
    ("verify", "--prime", "2"),
    ("verify", "--case", "GL3"),
    ("verify", "--length-bound", "9"),
    ("verify", "--multipliers", "3,1"),
    ("verify", "--multipliers", "1"),
    ("verify", "--tolerance", "0"),
    ("verify", "--case", "GL2", "--mu-center", "sign"),
    ("levi", "--max-rank", "0"),
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == EXIT_USAGE


def test_render_complex_values():
    text = render({}, [Row("x", 1j, 1j, 0.0, True)], "json")
    assert json.loads(text)["rows"][0]["computed"] == [0.0, 1.0]
    flat = list(csv.reader(io.StringIO(render({}, [Row("x", 1j, 1j, 0.0, True)], "csv"))))
    assert flat[1][1] == "[0.0, 1.0]"
