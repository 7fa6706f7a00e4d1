import csv
import json
import math

import numpy as np
import pytest

from notouch import cli
from notouch.interferometer import matrix_to_pairs
from notouch.schmidt_canonical import ThreeQubitState, ghz_state, w_state


@pytest.fixture
def write_state(tmp_path):
    def _write(amps, name="state.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"amplitudes": [[z.real, z.imag] for z in np.asarray(amps, complex)]}))
        return str(path)

    return _write


def test_prepare_ghz(write_state, tmp_path):
    out = tmp_path / "res.json"
    code = cli.main(["prepare", "--in", write_state(ghz_state().amplitudes), "--out", str(out)])
    assert code == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["probability"] == pytest.approx(1 / 18, abs=1e-12)
    assert doc["probability_rational"] == "1/18"
    assert doc["fidelity"] > 1 - 1e-9
    assert ThreeQubitState.from_dict(doc["state"]).fidelity(ghz_state()) > 1 - 1e-9


def test_prepare_rejects_unnormalized(write_state, capsys):
    code = cli.main(["prepare", "--in", write_state(np.ones(8))])
    assert code == cli.EXIT_INPUT
    assert "normalized" in capsys.readouterr().err


def test_prepare_rejects_bad_schema(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"amps": []}))
    assert cli.main(["prepare", "--in", str(path)]) == cli.EXIT_INPUT
    path.write_text("{not json")
    assert cli.main(["prepare", "--in", str(path)]) == cli.EXIT_INPUT


def test_prepare_fermion_w(write_state, tmp_path):
    out = tmp_path / "res.json"
    code = cli.main(["prepare", "--in", write_state(w_state().amplitudes),
                     "--statistics", "fermion", "--out", str(out)])
    assert code == cli.EXIT_OK
    assert json.loads(out.read_text())["statistics"] == "fermion"


def test_prepare_bad_statistics(write_state):
    assert cli.main(["prepare", "--in", write_state(ghz_state().amplitudes),
                     "--statistics", "gluon"]) == cli.EXIT_INPUT


def test_prepare_reports_acceptance_failure(write_state, monkeypatch):
    real = cli.protocol.prepare

    def broken(target, stats):
        res, locs = real(target, stats)
        return cli.protocol.PostSelectionResult(res.qubit_state, 0.5, res.raw_terms), locs

    monkeypatch.setattr(cli.protocol, "prepare", broken)
    assert cli.main(["prepare", "--in", write_state(ghz_state().amplitudes)]) == cli.EXIT_ACCEPTANCE


def test_decompose(write_state, capsys):
    assert cli.main(["decompose", "--in", write_state(w_state().amplitudes)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["a"] == pytest.approx(1 / math.sqrt(3))
    assert len(doc["locals"]) == 3


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["verify", "--trials", "1", "--seed", "42", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_anyons_and_workers(tmp_path):
    paths = []
    for workers in ("1", "3"):
        path = tmp_path / f"v{workers}.json"
        code = cli.main(["verify", "--trials", "30", "--seed", "7", "--workers", workers,
                         "--statistics", "boson", "fermion", "anyon:1.0471975512",
                         "--out", str(path)])
        assert code == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    assert doc["trials"] == 30
    assert set(doc["by_statistics"]) == {"boson", "fermion", "anyon:1.0471975512"}
    assert doc["min_fidelity"] >= 1 - 1e-9
    assert doc["max_prob_deviation"] < 1e-9


def test_verify_bad_trials():
    assert cli.main(["verify", "--trials", "0"]) == cli.EXIT_INPUT


def test_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["slocc-sweep", "--grid", "2x2", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["chi", "alpha", "p_succ"]
    assert len(rows) == 5


def test_sweep_frobenius_below_spectral(tmp_path):
    spec, frob = tmp_path / "s.csv", tmp_path / "f.csv"
    cli.main(["slocc-sweep", "--grid", "10x10", "--out", str(spec)])
    cli.main(["slocc-sweep", "--grid", "10x10", "--norm", "frobenius", "--out", str(frob)])
    ps = [float(r[2]) for r in list(csv.reader(spec.open()))[1:]]
    pf = [float(r[2]) for r in list(csv.reader(frob.open()))[1:]]
    assert all(f <= s * (1 + 1e-11) for f, s in zip(pf, ps))


@pytest.mark.parametrize("grid", ["1x5", "ax3", "2x3x4"])
def test_sweep_bad_grid(grid):
    assert cli.main(["slocc-sweep", "--grid", grid]) == cli.EXIT_INPUT


def test_oracle_check_random(capsys):
    assert cli.main(["oracle-check", "--count", "5", "--seed", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_oracle_check_identity(tmp_path):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"unitaries": [matrix_to_pairs(np.eye(10))]}))
    assert cli.main(["oracle-check", "--in", str(path)]) == 0
    report = cli.oracle_check([np.eye(10)])
    assert report["max_amplitude_deviation"] == 0.0


def test_oracle_check_rejects_non_unitary(tmp_path):
    bad = np.eye(10)
    bad[0, 0] = 2.0
    path = tmp_path / "u.json"
    path.write_text(json.dumps([matrix_to_pairs(bad)]))
    assert cli.main(["oracle-check", "--in", str(path)]) == cli.EXIT_INPUT


def test_oracle_check_mismatch_exit(monkeypatch, capsys):
    monkeypatch.setattr(cli, "oracle_check", lambda us: {
        "count": 1, "max_amplitude_deviation": 1.0, "max_norm_deviation": 0.0, "passed": False})
    assert cli.main(["oracle-check", "--count", "1"]) == cli.EXIT_ORACLE
    assert "mismatch" in capsys.readouterr().err


def test_probability_label():
    assert cli.probability_label(1 / 18) == "1/18"
    assert cli.probability_label(0.06) is None
