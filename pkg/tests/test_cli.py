import csv
import io
import json

import numpy as np
import pytest

from qdeg.cli import main
from qdeg.polyx import UnivariatePoly
from qdeg.symfun import make_named, write_spectrum


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_enumerate_or6(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "or", "--n", "6", "--eps", "0.1", "--mode", "enumerate")
    table = rows(out)
    assert code == 0 and len(table) == 64
    assert all(float(r["error_mass"]) <= 0.1 for r in table)
    assert all(r["ok"] == "True" for r in table)


def test_simulate_parity_runs(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "parity", "--n", "6", "--eps", "0.2", "--x", "101100")
    assert code == 0
    assert rows(out)[0]["t"] == "3"


def test_simulate_sample_is_deterministic(capsys):
    argv = ("simulate", "--family", "threshold2", "--n", "7", "--eps", "0.1", "--mode", "sample", "--seed", "3",
            "--json")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    data = json.loads(first)
    assert len(data["rows"]) == 128 and data["summary"]["seed"] == 3


def test_simulate_budget_exceeded(capsys):
    code, _, err = run(capsys, "simulate", "--n", "12", "--budget", "10")
    assert code == 3 and "budget" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--mode", "guess"])
    assert info.value.code != 0
    code, _, err = run(capsys, "degree", "--family", "triangle", "--n", "5")
    assert code == 2 and "error" in err


def _extract(capsys, family, tmp_path):
    out = tmp_path / f"{family}.csv"
    code, _, _ = run(capsys, "extract", "--family", family, "--n", "4", "--eps", "0.3333333333", "--out", str(out))
    summary = json.loads((tmp_path / f"{family}.csv.summary.json").read_text())
    return code, rows(out.read_text()), summary


def test_extract_or4_and_mirror(capsys, tmp_path):
    code, or_rows, or_sum = _extract(capsys, "or", tmp_path)
    assert code == 0 and or_sum["passed"] and or_sum["runs"][0]["degree_le_2T"]
    code, and_rows, and_sum = _extract(capsys, "and", tmp_path)
    assert code == 0 and and_sum["passed"]

    def q(table):
        c = [float(r["coefficient"]) for r in table if r["basis"].startswith("chebyshev")]
        return UnivariatePoly(4, np.array(c)).values()

    # AND(x) = 1 - OR(not x), and the algorithm mirrors that exactly
    np.testing.assert_allclose(q(and_rows), 1 - q(or_rows)[::-1], atol=1e-9)


def test_extract_constant(capsys, tmp_path):
    from qdeg.symfun import SymmetricFunction
    path = tmp_path / "c.txt"
    write_spectrum(SymmetricFunction(3, (1, 1, 1, 1)), path)
    code, out, _ = run(capsys, "extract", "--spectrum-file", str(path), "--json")
    data = json.loads(out)
    assert code == 0 and data["summary"]["runs"][0]["degree"] == 0


def test_degree_rows(capsys):
    code, out, _ = run(capsys, "degree", "--family", "parity", "--n", "8", "--eps", "0.4")
    assert code == 0 and rows(out)[0]["deg_eps"] == "8"
    code, out, _ = run(capsys, "degree", "--family", "or", "--n", "16", "--eps", "0.01")
    table = rows(out)
    assert len(table) == 1 and int(table[0]["deg_eps"]) == 10


def test_degree_band(capsys):
    code, out, _ = run(capsys, "degree", "--band", "--family", "threshold2", "--n", "16,32,64",
                       "--eps", "0.333,0.01,0.0001", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["summary"]["monotone_n"] and data["summary"]["monotone_eps"]
    assert len(data["rows"]) == 9


def test_degree_band_limit_failure(capsys):
    code, out, _ = run(capsys, "degree", "--band", "--family", "or", "--n", "16,32", "--eps", "0.333,0.001",
                       "--band-limit", "1.01", "--json")
    assert code == 1 and not json.loads(out)["summary"]["passed"]


def test_degree_checks_and_workers(capsys):
    code, out, _ = run(capsys, "degree", "--family", "or", "--n", "4,5", "--eps", "0.3333", "--checks",
                       "--workers", "2", "--json")
    data = json.loads(out)
    assert code == 0 and all(c["passed"] for c in data["summary"]["checks"])
