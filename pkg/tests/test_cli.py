"""Command line behavior: verbs, exit codes, deterministic reports."""

import json
import pathlib
import subprocess
import sys

import pytest

from convexop import __version__
from convexop.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


def run_main(*argv):
    return main([str(a) for a in argv])


def test_version_verb(capsys):
    assert run_main("version") == 0
    assert capsys.readouterr().out.strip() == f"convexop {__version__}"


def test_run_emits_report(capsys):
    assert run_main("run", SCENARIOS / "quantum_zx.yaml") == 0
    out = capsys.readouterr().out
    data = json.loads(out)
    assert abs(data["probability"] - 0.5) < 1e-12
    assert list(data) == ["probability", "per_step", "final_state", "validation"]


def test_run_matches_golden_bytes(capsys):
    for name in ("quantum_zx", "classical_cycle", "postselect"):
        assert run_main("run", SCENARIOS / f"{name}.yaml") == 0
        out = capsys.readouterr().out
        golden = (GOLDEN / f"{name}.json").read_text()
        assert out == golden, f"report for {name} drifted from its golden copy"


def test_run_twice_is_byte_identical(capsys):
    run_main("run", SCENARIOS / "postselect.yaml")
    first = capsys.readouterr().out
    run_main("run", SCENARIOS / "postselect.yaml")
    assert capsys.readouterr().out == first


def test_run_multiple_files_concatenates(capsys):
    code = run_main(
        "run", SCENARIOS / "quantum_zx.yaml", SCENARIOS / "classical_cycle.yaml"
    )
    assert code == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / "quantum_zx.json").read_text() + (
        GOLDEN / "classical_cycle.json"
    ).read_text()


def test_report_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    assert run_main("run", SCENARIOS / "quantum_zx.yaml", "--report", target) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == (GOLDEN / "quantum_zx.json").read_text()


def test_report_flag_rejects_multiple_inputs(capsys):
    with pytest.raises(SystemExit) as info:
        run_main(
            "run",
            SCENARIOS / "quantum_zx.yaml",
            SCENARIOS / "postselect.yaml",
            "--report",
            "x.json",
        )
    assert info.value.code == 2


def test_quiet_flag_suppresses_stdout(capsys):
    assert run_main("run", SCENARIOS / "quantum_zx.yaml", "--quiet") == 0
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "name, code",
    [
        ("bad_syntax.yaml", 2),
        ("bad_schema.yaml", 2),
        ("bad_mu.yaml", 3),
        ("bad_cp.yaml", 3),
        ("bad_conditioning.yaml", 4),
    ],
)
def test_exit_codes_for_malformed_inputs(name, code, capsys):
    assert run_main("run", SCENARIOS / "malformed" / name) == code
    err = capsys.readouterr().err
    assert err.startswith("error:")


def test_missing_file_is_exit_2(capsys):
    assert run_main("run", SCENARIOS / "no_such_file.yaml") == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_flag_is_exit_2():
    with pytest.raises(SystemExit) as info:
        run_main("run", "--bogus", SCENARIOS / "quantum_zx.yaml")
    assert info.value.code == 2


def test_failed_validation_prints_check_table(capsys):
    assert run_main("run", SCENARIOS / "malformed" / "bad_cp.yaml") == 3
    captured = capsys.readouterr()
    data = json.loads(captured.out)
    failed = [c for c in data["validation"] if not c["passed"]]
    assert failed and all(c["check"] == "complete_positivity" for c in failed)
    assert "complete_positivity" in captured.err


def test_validate_verb_passes_good_file(capsys):
    assert run_main("validate", SCENARIOS / "quantum_zx.yaml") == 0
    data = json.loads(capsys.readouterr().out)
    assert all(c["passed"] for c in data["validation"])


def test_validate_verb_fails_non_cp_file(capsys):
    assert run_main("validate", SCENARIOS / "malformed" / "bad_cp.yaml") == 3
    data = json.loads(capsys.readouterr().out)
    assert any(not c["passed"] for c in data["validation"])


def test_validate_verb_accepts_bad_conditioning(capsys):
    # a zero-probability branch is a property of the run, not the document
    assert run_main("validate", SCENARIOS / "malformed" / "bad_conditioning.yaml") == 0


def test_witness_verb_matches_golden(capsys):
    assert run_main("witness-antilattice", SCENARIOS / "witness_canonical.yaml") == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / "witness_canonical.json").read_text()
    data = json.loads(out)
    assert data["comparable"] is False
    assert data["dominator_found"] is False


def test_witness_verb_rejects_indefinite_input(tmp_path, capsys):
    bad = tmp_path / "w.yaml"
    bad.write_text("A: [[1, 0], [0, -1]]\nB: [[1, 0], [0, 1]]\n")
    assert run_main("witness-antilattice", bad) == 3
    assert "not positive semidefinite" in capsys.readouterr().err


def test_witness_verb_rejects_missing_matrix(tmp_path, capsys):
    bad = tmp_path / "w.yaml"
    bad.write_text("A: [[1, 0], [0, 1]]\n")
    assert run_main("witness-antilattice", bad) == 2


def test_console_script_runs_in_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "convexop", "run", str(SCENARIOS / "quantum_zx.yaml")],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert result.stdout == (GOLDEN / "quantum_zx.json").read_text()


def test_subprocess_and_in_process_agree(capsys):
    run_main("run", SCENARIOS / "classical_cycle.yaml")
    in_process = capsys.readouterr().out
    result = subprocess.run(
        [sys.executable, "-m", "convexop", "run",
         str(SCENARIOS / "classical_cycle.yaml")],
        capture_output=True,
        text=True,
    )
    assert result.stdout == in_process
