import json
from fractions import Fraction

import pytest

from debruijn.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, main
from debruijn.matrices import from_csv, generator
from debruijn.verify import CHECK_NAMES
from debruijn.words import RateSystem


@pytest.fixture
def r0_file(tmp_path, R0):
    path = tmp_path / "R0.json"
    path.write_text(json.dumps(R0.to_json()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_stationary_R0(capsys, r0_file):
    code, data = run_json(capsys, "stationary", "--rates", r0_file)
    assert code == EXIT_OK
    probs = [Fraction(r["prob"]) for r in data["rows"]]
    assert probs == [Fraction(1, 10), Fraction(1, 8), Fraction(3, 20), Fraction(5, 8)]
    assert [r["word"] for r in data["rows"]] == ["11", "12", "21", "22"]
    pf = data["partition_function"]
    assert pf["formula"] == pf["denominator_lcm"] == "120" and pf["matches"] is True


def test_stationary_csv(capsys, r0_file):
    code, out, _ = run(capsys, "stationary", "--rates", r0_file, "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["word,prob", "11,1/10", "12,1/8", "21,3/20", "22,5/8"]


def test_stationary_bernoulli(capsys):
    code, data = run_json(capsys, "stationary", "--special", "bernoulli", "--y", "1,3", "--L", "2")
    assert code == EXIT_OK
    assert [r["prob"] for r in data["rows"]] == ["1/16", "3/16", "3/16", "9/16"]


def test_missing_rate(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "L": 2, "rates": {"1,1": "1", "1,2": "2", "2,1": "3"}}))
    code, _, err = run(capsys, "stationary", "--rates", str(path))
    assert code == EXIT_INPUT and "(2,2)" in err


def test_zero_rate(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"n": 2, "L": 1, "rates": {"1,1": "0", "2,1": "3"}}))
    assert run(capsys, "stationary", "--rates", str(path))[0] == EXIT_INPUT


@pytest.mark.parametrize(
    "argv",
    [
        ["stationary"],
        ["stationary", "--rates", "nowhere.json"],
        ["stationary", "--special", "skin-deep", "--L", "2"],
        ["simulate", "--special", "skin-deep", "--n", "2", "--x", "3", "--L", "2", "--time", "5", "--burn-in", "9"],
        ["correlate", "--model", "skin-deep", "--n", "2", "--x", "3", "--i", "2", "--j", "2"],
    ],
)
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_INPUT


def test_spectrum_R0(capsys, r0_file):
    code, data = run_json(capsys, "spectrum", "--rates", r0_file)
    assert code == EXIT_OK and data["verified"] is True and data["recursion"] is True
    assert [(r["eigenvalue"], r["multiplicity"]) for r in data["eigenvalues"]] == [("0", 1), ("-4", 1), ("-5", 1), ("-6", 1)]


def test_spectrum_cap(capsys):
    argv = ["spectrum", "--special", "skin-deep", "--n", "3", "--x", "2", "--L", "3", "--cap", "10"]
    assert run(capsys, *argv)[0] == EXIT_CAP


def test_correlate_skin_deep(capsys):
    code, data = run_json(capsys, "correlate", "--model", "skin-deep", "--n", "2", "--x", "3", "--i", "1", "--j", "2", "--letters", "1,1")
    assert code == EXIT_OK
    assert data == {"closed_form": "1/8", "enumeration": "1/8", "match": True}


def test_correlate_bernoulli(capsys):
    code, data = run_json(
        capsys, "correlate", "--model", "bernoulli", "--y", "1,3", "--L", "3", "--sites", "1,3", "--letters", "2,2"
    )
    assert code == EXIT_OK and data["closed_form"] == data["enumeration"] == "9/16"


def test_correlate_rates_suffix(capsys, r0_file):
    code, data = run_json(capsys, "correlate", "--model", "rates", "--rates", r0_file, "--sites", "2", "--letters", "2")
    assert code == EXIT_OK and data["closed_form"] == "3/4" and data["match"] is True


def test_simulate(capsys, r0_file):
    argv = ["simulate", "--rates", r0_file, "--time", "1e5", "--seed", "7"]
    code, data = run_json(capsys, *argv)
    assert code == EXIT_OK and data["tv"] < 0.02
    assert len(data["measure"]) == 4
    assert run_json(capsys, *argv)[1] == data


def test_export_roundtrip(capsys, r0_file, R0):
    code, out, _ = run(capsys, "export-matrix", "--rates", r0_file, "--which", "kirchhoff")
    assert code == EXIT_OK
    assert from_csv(out, R0.n, R0.n**R0.L) == generator(R0)


def test_export_dense_json(capsys):
    code, data = run_json(capsys, "export-matrix", "--special", "bernoulli", "--y", "1,3", "--L", "1", "--format", "json")
    assert code == EXIT_OK and data["values"] == [["-3", "1"], ["3", "-1"]]


def test_rate_file_roundtrip(tmp_path, R0):
    path = tmp_path / "r.json"
    path.write_text(json.dumps(R0.to_json()))
    assert RateSystem.load(str(path)) == R0


def test_verify_small_grid_passes(capsys):
    code, data = run_json(capsys, "verify", "--max-L", "3", "--points", "1")
    assert code == EXIT_OK and data["passed"] is True


def test_verify_cap(capsys):
    assert run(capsys, "verify", "--max-L", "6")[0] == EXIT_CAP


def test_verify_default_grid(capsys):
    """Exercises every named check; the partition function fails at L=4 only."""
    code, data = run_json(capsys, "verify", "--jobs", "4")
    assert set(data["summary"]) == set(CHECK_NAMES)
    failing = {(c["check"], c["L"]) for c in data["checks"] if not c["passed"]}
    assert failing == {("partition_function", 4)}
    assert code == EXIT_VERIFY
