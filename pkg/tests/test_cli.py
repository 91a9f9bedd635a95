import csv
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from vortexqc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    data = json.loads(out)
    jsonschema.validate(data, cli.REPORT_SCHEMA)
    return code, data


def as_matrix(pairs):
    return np.array([[re + 1j * im for re, im in row] for row in pairs])


def test_verify_default_passes(capsys):
    code, data = report(capsys, "verify")
    assert code == 0
    assert data["scenario"] == "verify"
    assert len(data["checks"]) >= 20
    assert all(c["pass"] for c in data["checks"])


def test_verify_tight_tolerance_fails(capsys):
    code, data = report(capsys, "--tol", "1e-16", "verify")
    assert code == 1
    failed = [c for c in data["checks"] if not c["pass"]]
    assert failed and all(c["value"] > 1e-16 for c in failed)


def test_verify_filter(capsys):
    code, data = report(capsys, "verify", "--filter", "m31")
    assert code == 0
    assert data["checks"] and all("m31" in c["name"] for c in data["checks"])


def test_gate_zero_is_identity(capsys):
    code, data = report(capsys, "gate", "--eta", "0", "--phi", "0")
    assert code == 0
    assert np.allclose(as_matrix(data["matrices"]["M"]), np.eye(2))
    assert np.allclose(as_matrix(data["matrices"]["composite_odd"]), np.eye(4))
    assert data["details"]["dwell_time"] == 0


def test_gate_compose_hadamard(capsys):
    code, data = report(capsys, "gate", "--eta", "0.3", "--phi", "1.1", "--compose", "pi/4,-pi/2;pi/2,0")
    assert code == 0
    assert data["details"]["hadamard"] is True
    assert data["details"]["blocks_ok"] is True
    assert [s["step"] for s in data["details"]["schedule"]] == ["exchange", "dwell", "exchange"]


def test_gate_compose_non_hadamard(capsys):
    _, data = report(capsys, "gate", "--compose", "pi/2,0;pi/4,-pi/2")
    assert data["details"]["hadamard"] is False


@pytest.mark.parametrize(
    "target,length",
    [("1,0,0,1", 0), ("0.7071067811865476,0.7071067811865476,0.7071067811865476,-0.7071067811865476", 2)],
)
def test_synthesize_targets(capsys, target, length):
    code, data = report(capsys, "synthesize", "--target", target)
    assert code == 0
    assert len(data["details"]["sequence"]) == length
    assert data["fidelities"]["reconstruction"]["value"] >= 1 - 1e-9


def test_synthesize_complex_entries(capsys):
    code, data = report(capsys, "synthesize", "--target", "0,1j,1j,0")
    assert code == 0


def test_synthesize_non_unitary(capsys):
    code, _, err = run(capsys, "synthesize", "--target", "1,1,0,1")
    assert code == 2
    assert "not unitary" in err


def test_synthesize_random_is_deterministic(capsys):
    _, a, _ = run(capsys, "--no-timing", "synthesize", "--random", "--seed", "7")
    _, b, _ = run(capsys, "--no-timing", "synthesize", "--random", "--seed", "7")
    _, c, _ = run(capsys, "--no-timing", "synthesize", "--random", "--seed", "8")
    assert a == b
    assert a != c


def test_rabi_defaults(capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    code, data = report(capsys, "rabi", "--trace", str(trace))
    assert code == 0
    assert all(row["max_transfer"] >= 0.99 for row in data["details"]["transitions"])
    with open(trace) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t" and len(rows[0]) == 9
    assert float(rows[1][0]) == 0.0
    assert all(len(r) == 9 for r in rows)


def test_rabi_without_drive(capsys):
    code, data = report(capsys, "rabi", "--dJ", "0", "--max-periods", "10")
    assert code == 0
    assert all(row["max_transfer"] == 0 for row in data["details"]["transitions"])
    assert not any(c["name"].startswith("transfer") for c in data["checks"])


def test_rabi_csv_stdout(capsys):
    code, out, _ = run(capsys, "--csv", "rabi", "--max-periods", "2", "--steps", "32")
    lines = out.strip().splitlines()
    assert lines[0].startswith("t,a,")
    # 15 significant digits at most
    assert all(len(v.lstrip("-").replace(".", "").split("e")[0]) <= 16 for v in lines[2].split(","))


def test_rabi_strong_drive_warns(capsys):
    _, _, err = run(capsys, "rabi", "--dJ", "0.5", "--max-periods", "2")
    assert "exceeds 0.2" in err


@pytest.mark.parametrize("argv", [["rabi", "--pair", "1,1"], ["rabi", "--steps", "8"]])
def test_rabi_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_entangle_default(capsys):
    code, data = report(capsys, "entangle")
    assert code == 0
    assert data["fidelities"]["phi_minus"]["value"] >= 0.99
    assert data["details"]["fidelity_phi_plus"] < 0.01
    assert "sign" in data["details"]["sign_note"]
    assert data["details"]["conditions"]["ratio_weak"] == "inf"


def test_entangle_decoupled_is_protocol_failure(capsys):
    code, out, err = run(capsys, "entangle", "--J11p", "0")
    assert code == 3
    assert "no |01> <-> |10> exchange" in err


def test_entangle_sweep(capsys):
    code, data = report(capsys, "entangle", "--sweep", "J11p=0.2,0.1,0.05,0.02")
    assert code == 0
    assert [row["J11p"] for row in data["details"]["sweep"]] == [0.2, 0.1, 0.05, 0.02]
    assert data["checks"][0]["name"] == "sweep.monotone" and data["checks"][0]["pass"]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nseed = 3\n[gate]\neta = pi/3\nphi = 0.5\n")
    code, data = report(capsys, "--config", str(cfg), "gate", "--phi", "0.25")
    assert code == 0
    assert data["inputs"]["eta"] == pytest.approx(np.pi / 3)
    assert data["inputs"]["phi"] == 0.25  # command line wins


@pytest.mark.parametrize(
    "text", ["[gate]\nbogus = 1\n", "[nonsense]\nx = 1\n", "[gate]\neta = inf\n", "[gate]\neta = __import__('os')\n"]
)
def test_bad_config_rejected(capsys, tmp_path, text):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    code, _, err = run(capsys, "--config", str(cfg), "gate")
    assert code == 2
    assert "error" in err


def test_missing_config(capsys, tmp_path):
    assert run(capsys, "--config", str(tmp_path / "none.ini"), "verify")[0] == 2


def test_out_file_and_byte_identical_reruns(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, out, _ = run(capsys, "--no-timing", "--out", str(path), "verify")
        assert code == 0 and out == ""
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["duration_ms"] == 0


def test_bad_number_rejected():
    with pytest.raises(SystemExit):
        cli.main(["gate", "--eta", "one"])


@pytest.mark.parametrize("text,value", [("pi/4", np.pi / 4), ("-pi/2", -np.pi / 2), ("2*pi", 2 * np.pi), ("1e-3", 1e-3)])
def test_parse_number(text, value):
    assert cli.parse_number(text) == pytest.approx(value)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "vortexqc", "verify", "--filter", "hadamard"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"][0]["name"] == "hadamard.infidelity"
