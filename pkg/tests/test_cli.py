import csv
import io
import json
import subprocess
import sys

import pytest

from octacube import dynamics
from octacube.cli import SPECTRUM_HEADER, main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_ground_row(capsys):
    code, out, _ = run(capsys, "spectrum", "--emax-int", "39")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == SPECTRUM_HEADER
    assert rows[1][:9] == ["3", "1", "1", "2", "11", "5", "3", "1", "39"]
    assert float(rows[1][9]) == pytest.approx(13 * 3.141592653589793**2 / 2, rel=1e-14)


def test_spectrum_empty(capsys):
    code, out, _ = run(capsys, "spectrum", "--emax-int", "38")
    assert code == 0
    assert out.strip().splitlines() == [",".join(SPECTRUM_HEADER)]


def test_spectrum_physical_cap(capsys):
    code, out, _ = run(capsys, "spectrum", "--emax", "64.2")
    # 64.2 / (pi^2/6) = 39.03
    assert code == 0
    assert len(out.strip().splitlines()) == 2


@pytest.mark.parametrize("argv", [
    ["spectrum", "--emax-int", "-1"],
    ["spectrum"],
    ["spectrum", "--emax-int", "5", "--L", "-1"],
    ["weyl", "--emax-int", "100", "--points", "1"],
    ["mc", "--L", "-1"],
    ["mc", "--samples", "10"],
    ["mc", "--qn", "1", "1", "1", "1"],
    ["trace", "--events", "0"],
    ["density", "--plane", "1", "0", "0", "0", "5", "--sphere", "0.58", "0.2", "0.1", "0.05", "0.05"],
    ["density", "--plane", "1", "0", "0", "0", "0.55", "--sphere", "0.58", "0.2", "0.1", "0.05", "0.05",
     "--element", "5000"],
    ["verify", "nonsense"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_weyl_output(capsys):
    code, out, _ = run(capsys, "weyl", "--emax-int", "2000", "--points", "11")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["E", "N_exact", "N_weyl"]
    assert len(rows) == 12
    counts = [int(r[1]) for r in rows[1:]]
    assert counts == sorted(counts)


def test_density_grid(capsys):
    args = ["density", "--plane", "1", "0", "0", "0", "0.55",
            "--sphere", "0.5833", "0.2167", "0.1167", "0.05", "0.05", "--resolution", "16"]
    code, out, _ = run(capsys, *args)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["lon", "lat", "density"]
    assert len(rows) == 1 + 16 * 16
    dens = [float(r[2]) for r in rows[1:]]
    assert min(dens) >= 0
    code, out2, _ = run(capsys, *args, "--element", "700")
    d2 = [float(r[2]) for r in csv.reader(io.StringIO(out2)) if r[0] != "lon"]
    assert d2 == pytest.approx(dens, rel=1e-9, abs=1e-12)


def test_verify_deterministic(capsys):
    c1, o1, _ = run(capsys, "verify", "invariants", "--seed", "3")
    c2, o2, _ = run(capsys, "verify", "invariants", "--seed", "3")
    assert c1 == c2 == 0
    assert o1 == o2
    rep = json.loads(o1)
    assert rep["suite"] == "invariants"
    assert all(c["name"].startswith("invariants.") for c in rep["checks"])


def test_verify_group(capsys):
    code, out, _ = run(capsys, "verify", "group")
    assert code == 0
    assert all(c["pass"] for c in json.loads(out)["checks"])


def test_mc_json(capsys):
    code, out, _ = run(capsys, "mc", "--samples", "2000", "--seed", "4")
    d = json.loads(out)
    assert code == 0
    assert set(d) == {"value_re", "value_im", "std_error", "n_samples", "seed"}
    assert d["n_samples"] == 2000 and d["seed"] == 4


def test_group_json(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, _, _ = run(capsys, "group", "--out", str(path))
    data = json.loads(path.read_text())
    assert code == 0
    assert len(data) == 1152
    assert sum(e["parity"] == 1 for e in data) == 576


def test_trace_header(capsys):
    code, out, _ = run(capsys, "trace", "--events", "5", "--seed", "1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == dynamics.TRACE_HEADER
    assert len(rows) == 6
    assert {r[1] for r in rows[1:]} <= set(dynamics.KINDS)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "octacube", "spectrum", "--emax-int", "51"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert len(p.stdout.strip().splitlines()) == 3
