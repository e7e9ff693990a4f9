import io
import json

import numpy as np
import pytest

from entangle_hierarchy.channels import random_isometry, save_channel
from entangle_hierarchy.cli import (EXIT_CONSISTENCY, EXIT_FAIL, EXIT_INPUT, EXIT_OK, main, sample_summary,
                                    split_tolerances)
from entangle_hierarchy.errors import InvalidStateError, UsageError
from entangle_hierarchy.linalg import QuantumState
from entangle_hierarchy.statefile import load_state, save_state, state_from_json
from entangle_hierarchy.states import bell, ghz3, horodecki_locking, random_pure


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_classify_bell_file_all_no(tmp_path):
    path = tmp_path / "bell.json"
    save_state(bell(), path)
    code, text = run("classify", "--state", str(path))
    assert code == EXIT_OK
    report = json.loads(text)
    assert {v["value"] for v in report["verdicts"].values()} == {"No"}


def test_classify_tripartite_cut(tmp_path):
    path = tmp_path / "ghz.json"
    save_state(ghz3(), path)
    code, text = run("classify", "--state", str(path), "--cut", "BC")
    assert code == EXIT_OK
    assert json.loads(text)["verdicts"]["SEP"]["value"] == "Yes"


def test_classify_builtin():
    code, text = run("classify", "--builtin", "antisym3", "--cut", "AB")
    rep = json.loads(text)
    assert code == EXIT_OK
    assert rep["verdicts"]["RED"]["value"] == "Yes"
    assert rep["verdicts"]["UND"]["value"] == "No"


@pytest.mark.parametrize("argv", [
    ("classify", "--builtin", "nope"),
    ("classify", "--builtin", "bell", "--cut", "AC"),
    ("classify",),
    ("classify", "--state", "/nonexistent/x.json"),
    ("frobnicate",),
    ("verify", "--samples", "0"),
    ("sample", "--dims", "2,2", "--rank", "9"),
    ("sample", "--dims", "x"),
    ("channel", "--builtin-channel", "warp:2"),
    ("channel", "--channel", "/nonexistent/c.json"),
    ("demo", "--tol.bogus=1"),
    ("demo", "--tol.psd"),
])
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == EXIT_INPUT


def test_invalid_state_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dims": [2, 2], "re": [1, 0, 0, 0] * 3}))
    assert run("classify", "--state", str(path))[0] == EXIT_INPUT
    path.write_text("{not json")
    assert run("classify", "--state", str(path))[0] == EXIT_INPUT
    # trace 2
    path.write_text(json.dumps({"dims": [1, 2], "re": [1, 0, 0, 1]}))
    assert run("classify", "--state", str(path))[0] == EXIT_INPUT


def test_tolerance_override_changes_verdict(tmp_path):
    # Werner state just beyond the PPT threshold: min PT eigenvalue -0.0075
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    p = 1 / 3 + 0.01
    path = tmp_path / "w.json"
    save_state(QuantumState(p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4, (2, 2)), path)
    _, strict = run("classify", "--state", str(path))
    _, loose = run("classify", "--state", str(path), "--tol.psd=0.01", "--tol.maj=0.01")
    _, loose2 = run("--tol.psd", "0.01", "--tol.maj", "0.01", "classify", "--state", str(path))
    assert json.loads(strict)["verdicts"]["PPT"]["value"] == "No"
    assert json.loads(loose)["verdicts"]["PPT"]["value"] == "Yes"
    assert loose == loose2
    # loosening psd alone makes RED Yes while MAJ stays No: refused as inconsistent
    assert run("classify", "--state", str(path), "--tol.psd=0.01")[0] == EXIT_CONSISTENCY


def test_split_tolerances():
    rest, tol = split_tolerances(["demo", "--tol.ent=1e-6", "--tol.psd", "2e-9"])
    assert rest == ["demo"] and tol == {"ent": 1e-6, "psd": 2e-9}
    with pytest.raises(UsageError):
        split_tolerances(["--tol.ent=abc"])


def test_demo_exit_ok():
    code, text = run("demo")
    assert code == EXIT_OK and "locking d=3" in text
    code, text = run("demo", "--json")
    assert json.loads(text)["ok"] is True


def test_demo_fails_under_absurd_tolerance():
    # a relative rank cutoff of 1/2 drops genuine eigenvalues
    assert run("demo", "--tol.rank=0.5")[0] == EXIT_FAIL


def test_verify_small_suite():
    code, text = run("verify", "--suite", "corollary1", "--samples", "6")
    lines = [json.loads(x) for x in text.splitlines()]
    assert code == EXIT_OK
    assert lines[-1]["summary"] and lines[-1]["ok"]
    assert lines[-1]["violated"] == 0


def test_sample_fractions_regression():
    s = sample_summary((2, 2), 1000, 0, "density", 4)
    ppt = s["fractions"]["PPT"]["Yes"]
    # Hilbert-Schmidt two-qubit PPT probability is about 0.24
    assert 0.2 < ppt < 0.3
    assert ppt == pytest.approx(0.247, abs=1e-12)
    sep = sample_summary((2, 3), 50, 0, "separable")
    assert sep["fractions"]["SEP"]["Yes"] == 1.0


def test_sample_cli_deterministic():
    a = run("sample", "--dims", "2,2", "--samples", "30", "--seed", "5")
    b = run("sample", "--dims", "2,2", "--samples", "30", "--seed", "5")
    assert a == b and a[0] == EXIT_OK


def test_channel_file(tmp_path):
    path = tmp_path / "ch.json"
    save_channel(random_isometry(2, 2, 2, 3), path)
    code, text = run("channel", "--channel", str(path), "--samples", "8")
    assert code == EXIT_OK
    assert "ppt_channel" in json.loads(text)


def test_channel_builtin_tiles():
    code, text = run("channel", "--builtin-channel", "tiles")
    assert code == EXIT_OK
    assert json.loads(text)["corollary2"]["conclusion"] == "Verified"


def test_statefile_round_trip(tmp_path):
    for state in (horodecki_locking(2), random_pure((2, 3, 2), 1)):
        path = tmp_path / "s.json"
        save_state(state, path)
        back = load_state(path)
        a = back.matrix if isinstance(back, QuantumState) else back.amplitudes
        b = state.matrix if isinstance(state, QuantumState) else state.amplitudes
        np.testing.assert_array_equal(a, b)
        assert back.dims == state.dims


def test_statefile_errors():
    with pytest.raises(InvalidStateError):
        state_from_json({"re": [1]})
    with pytest.raises(InvalidStateError):
        state_from_json({"dims": [2], "re": [1, 0], "kind": "mixed"})
    with pytest.raises(InvalidStateError):
        state_from_json({"dims": [2], "re": [1, 0, 0], "im": [0, 0]})
