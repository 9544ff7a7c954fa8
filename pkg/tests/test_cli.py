import csv
import io
import json
import math
import subprocess
import sys

import pytest

from tqdchain.cli import format_number, main
from tqdchain.sweep import COLUMNS


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize(
    "x,text",
    [
        (0.0, "0"),
        (-0.0, "0"),
        (1.0, "1"),
        (1 / 3, "0.333333333333"),
        (0.4425, "0.4425"),
        (-16.901123046875, "-16.9011230469"),
        (1e-4, "0.0001"),
        (9.9e-5, "9.90000000000e-05"),
        (123456.789, "123456.789"),
        (1e6, "1.00000000000e+06"),
        (-2.5e7, "-2.50000000000e+07"),
    ],
)
def test_format_number(x, text):
    assert format_number(x) == text


def test_spectrum_spin():
    code, text = run("spectrum", "--model", "spin", "--j1", "1", "--j", "1")
    assert code == 0
    r = rows(text)
    assert len(r) == 8
    assert [float(x["numeric"]) for x in r] == [-3.0] * 4 + [3.0] * 4
    assert max(float(x["abs_deviation"]) for x in r) <= 1e-9


def test_spectrum_magnetic_b0_and_b1():
    code, text = run("spectrum", "--model", "magnetic", "--j", "1", "--b", "0")
    assert code == 0
    assert sorted(round(float(x["analytic"]), 9) for x in rows(text)) == [-3.0] * 4 + [3.0] * 4
    code, text = run("spectrum", "--model", "magnetic", "--j", "1", "--b", "1", "--format", "json")
    assert code == 0
    vals = [x["numeric"] for x in json.loads(text)]
    for target in (math.sqrt(12), -math.sqrt(12), math.sqrt(8), -math.sqrt(8)):
        assert min(abs(v - target) for v in vals) <= 1e-9


def test_discord_singlet():
    code, text = run("discord", "--model", "spin", "--j1", "0", "--j", "1", "--temp", "0",
                     "--bipartition", "pair_23")
    assert code == 0
    (row,) = rows(text)
    assert tuple(row) == COLUMNS
    assert float(row["discord"]) == pytest.approx(1.0, abs=1e-12)
    assert row["b"] == ""


def test_discord_zero_couplings():
    code, text = run("discord", "--model", "spin", "--j1", "0", "--j", "0", "--temp", "1",
                     "--bipartition", "pair_12")
    assert code == 0
    assert float(rows(text)[0]["discord"]) == pytest.approx(0.0, abs=1e-12)


def test_discord_magnetic_increases_with_b():
    vals = []
    for b in ("10", "12", "15"):
        code, text = run("discord", "--model", "magnetic", "--j", "1", "--b", b, "--temp", "0.25",
                         "--bipartition", "pair_23", "--format", "json")
        assert code == 0
        vals.append(json.loads(text)[0]["discord"])
    assert vals[0] > 0.8
    assert vals[0] < vals[1] < vals[2]


@pytest.mark.parametrize(
    "argv",
    [
        ["discord", "--model", "spin", "--j1", "0", "--temp", "1", "--bipartition", "pair_99"],
        ["discord", "--model", "spin", "--j1", "0", "--temp", "-1"],
        ["discord", "--model", "spin", "--temp", "1"],
        ["discord", "--model", "magnetic", "--j1", "2", "--temp", "1"],
        ["spectrum", "--model", "spin", "--j1", "abc"],
        ["spectrum", "--model", "spin", "--j1", "nan"],
        ["spectrum"],
        ["figure", "--figure", "7"],
        ["figure", "--figure", "1"],
        ["figure", "--figure", "2", "--panel", "c"],
        ["fit", "--j", "1", "--branch", "sideways"],
        ["fit", "--j", "1", "--branch", "j1_positive", "--tmin", "0"],
        ["sweep", "--spec", "/nonexistent.json"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    code, text = run(*argv)
    assert code == 1
    assert text == ""
    assert "error" in capsys.readouterr().err


def test_fit_no_convergence_exits_2():
    # J1c grows linearly with T, so a hot enough fit runs past the search limit
    code, _ = run("fit", "--j", "1", "--branch", "j1_positive", "--tmin", "1e6", "--tmax", "2e6",
                  "--tpoints", "2")
    assert code == 2


def test_fit_output():
    code, text = run("fit", "--j", "1", "--branch", "j1_negative", "--bipartition", "pair_23",
                     "--tmin", "2", "--tmax", "4", "--tpoints", "3")
    assert code == 0
    r = rows(text)
    assert [float(x["temp"]) for x in r] == [2.0, 3.0, 4.0]
    for x in r:
        assert float(x["j1c"]) == pytest.approx(-8.144 * float(x["temp"]) - 2.001, rel=0.02)
    assert len({x["slope"] for x in r}) == 1


def test_figure_4():
    code, text = run("figure", "--figure", "4")
    assert code == 0
    r = rows(text)
    assert len(r) == 802
    d23 = [float(x["discord"]) for x in r if x["bipartition"] == "pair_23"]
    d12 = [float(x["discord"]) for x in r if x["bipartition"] == "pair_12"]
    assert d23[-1] > 0.95
    assert d12[-1] < d12[0]


def test_figure_1a_endpoints():
    code, text = run("figure", "--figure", "1", "--panel", "a")
    assert code == 0
    r = [x for x in rows(text) if x["temp"] == "0.5"]
    assert float(r[0]["discord"]) == pytest.approx(1 / 3, abs=1e-3)
    assert float(r[-1]["discord"]) == pytest.approx(0.4425, abs=1e-2)


def test_figure_2b_both_ends_near_one_third():
    code, text = run("figure", "--figure", "2", "--panel", "b", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert all(set(d) == set(COLUMNS) for d in data)
    for t in (0.5, 1, 1.5):
        curve = [d["discord"] for d in data if d["temp"] == t]
        assert curve[0] == pytest.approx(1 / 3, abs=2e-2)
        assert curve[-1] == pytest.approx(1 / 3, abs=2e-2)


def test_sweep_spec_file(tmp_path):
    spec = {
        "model": "spin",
        "swept": {"name": "j1", "start": -1, "stop": 1, "points": 3},
        "fixed": {"j": 1},
        "temperatures": [0.5],
        "bipartitions": ["pair_12", "pair_13"],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, text = run("sweep", "--spec", str(path))
    assert code == 0
    r = rows(text)
    assert len(r) == 6
    for a, b in zip(r[::2], r[1::2]):
        assert a["discord"] == b["discord"]
    code2, text2 = run("figure", "--figure", "1", "--spec", str(path))
    assert (code2, text2) == (code, text)


def test_output_is_deterministic():
    argv = ("discord", "--model", "magnetic", "--j", "1", "--b", "3", "--temp", "0.4",
            "--bipartition", "one_vs_rest_1_23")
    assert run(*argv) == run(*argv)


def test_csv_line_endings_and_header():
    _, text = run("discord", "--model", "spin", "--j1", "2", "--j", "1", "--temp", "0.5")
    assert text.startswith(",".join(COLUMNS) + "\r\n")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tqdchain", "spectrum", "--model", "spin", "--j1", "2", "--j", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "max deviation" in proc.stderr
    assert proc.stdout.splitlines()[0] == "index,numeric,analytic,abs_deviation"
