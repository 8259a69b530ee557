import json
import subprocess
import sys

import pytest

from charshift import __version__
from charshift.cli import main, trial_rngs


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_solve_ff_exact(capsys):
    code, doc = run_json(capsys, "solve-ff", "--p", "7", "--r", "1", "--char-index", "3", "--shift", "4")
    assert code == 0
    assert doc["solution"] == [4]
    assert doc["theoretical_probability"] == "36/49"
    assert abs(doc["success_probability"] - 36 / 49) < 1e-12
    assert doc["schema"] == "charshift.report/1" and doc["version"] == __version__
    assert doc["params"]["shift"] == 4 and doc["seed"] == 0


def test_solve_ff_shift_zero(capsys):
    _, doc = run_json(capsys, "solve-ff", "--p", "7", "--char-index", "3", "--shift", "0")
    assert doc["solution"] == [0]


def test_solve_ff_sampled(capsys):
    code, doc = run_json(capsys, "solve-ff", "--p", "7", "--char-index", "3", "--shift", "4",
                         "--mode", "sampled", "--trials", "2000", "--seed", "1")
    assert code == 0
    assert doc["within_3sigma"] and doc["wrong"] == 0
    assert doc["theoretical_probability"] == "36/49"
    assert abs(doc["empirical_success"] - 36 / 49) < 3 * 0.0099


def test_byte_identical(capsys):
    argv = ["solve-ff", "--p", "5", "--r", "2", "--char-index", "4", "--random-shift", "--mode", "sampled",
            "--trials", "50", "--seed", "9"]
    a, b = run(capsys, *argv)[1], run(capsys, *argv)[1]
    assert a == b and a.count("\n") == 1
    assert run(capsys, *argv[:-1], "10")[1] != a


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("CHARSHIFT_SEED", "42")
    _, doc = run_json(capsys, "break-homo", "--p", "31")
    assert doc["seed"] == 42
    _, doc = run_json(capsys, "break-homo", "--p", "31", "--seed", "5")
    assert doc["seed"] == 5


def test_trial_streams_independent():
    a = [r.random() for r in trial_rngs(3, 5)]
    b = [r.random() for r in trial_rngs(3, 8)][:5]
    assert a == b and len(set(a)) == 5


def test_solve_ring(capsys):
    code, doc = run_json(capsys, "solve-ring", "--n", "9", "--char", "2-torsion", "--shift", "2")
    assert code == 0
    assert doc["solution"] == [2, 5, 8] and doc["period"] == 3
    assert doc["theoretical_probability"] == "8/27"


def test_solve_ring_sampled(capsys):
    code, doc = run_json(capsys, "solve-ring", "--n", "15", "--shift", "7", "--mode", "sampled", "--trials", "200")
    assert code == 0 and doc["wrong"] == 0
    assert abs(doc["empirical_success"] - 512 / 3375) < 0.08


def test_solve_unknown_n(capsys):
    code, doc = run_json(capsys, "solve-unknown-n", "--n", "15", "--shift", "4", "--bound", "16")
    assert code == 0 and doc["period"] == 15 and doc["solution"] == [4]


@pytest.mark.parametrize("preset,theory", [("z8", "3/8"), ("z4xz4", "1"), ("ring:15", "64/225")])
def test_solve_hcp(capsys, preset, theory):
    code, doc = run_json(capsys, "solve-hcp", "--preset", preset, "--shift", "3")
    assert code == 0 and doc["solution"] == [3]
    assert doc["theoretical_probability"] == theory


def test_break_homo(capsys):
    code, doc = run_json(capsys, "break-homo", "--p", "31", "--seed", "7")
    assert code == 0 and doc["verified"]
    assert doc["logical_queries"] == 2 * doc["attempts"]
    assert set(doc["oracle_calls"]) == {"A", "M", "Z"}
    assert doc["max_call_cost"] <= doc["call_cost_bound"]


def test_gauss_table(capsys):
    code, doc = run_json(capsys, "gauss-table", "--p", "7", "--k", "3")
    assert code == 0 and doc["residual"] < 1e-9
    assert len(doc["chi_hat"]) == 7 and all(len(z) == 2 for z in doc["chi_hat"])
    code, doc = run_json(capsys, "gauss-table", "--n", "15")
    assert code == 0 and doc["params"]["primitive"]


def test_verify(capsys):
    code, doc = run_json(capsys, "verify")
    assert code == 0 and all(line.startswith("PASS") for line in doc["checks"])


@pytest.mark.parametrize("argv,code", [
    (["solve-ff", "--p", "6", "--char-index", "1", "--shift", "0"], 2),
    (["solve-ff", "--p", "7", "--char-index", "3", "--shift", "9"], 2),
    (["solve-ring", "--n", "15", "--char", "0,1", "--shift", "0"], 2),
    (["solve-hcp", "--preset", "nope"], 2),
    (["gauss-table", "--p", "7", "--k", "0"], 2),
    (["solve-ff", "--p", "2", "--r", "17", "--char-index", "1", "--shift", "0"], 4),
    (["solve-unknown-n", "--n", "45", "--char", "1,1", "--bound", "16", "--shift", "0"], 3),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == "" and err.startswith("charshift:")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve-ff", "--p", "7"])
    assert exc.value.code == 2


def test_timing_flag(capsys):
    _, doc = run_json(capsys, "solve-ff", "--p", "5", "--char-index", "1", "--shift", "1", "--timing")
    assert doc["wall_time"] >= 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "charshift", "solve-ff", "--p", "7", "--char-index", "3",
                          "--shift", "4"], capture_output=True, text=True, check=True).stdout
    assert "solution=[4]" in out and 'theoretical_probability="36/49"' in out
