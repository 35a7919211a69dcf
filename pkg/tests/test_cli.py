"""End-to-end command line behavior, including exit codes."""

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from epigame.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"
PD = str(DATA / "pd.game")
TBT = str(DATA / "threebytwo.game")
FIG2 = str(DATA / "fig2.emodel")
DERIV = str(DATA / "formula3.deriv")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------- solve ----------


def test_solve_pd(capsys):
    code, out, _ = run(capsys, "solve", PD)
    assert code == 0
    assert "outcome: {D} | {D}" in out
    assert "closure ordinal: 1" in out


def test_solve_trace(capsys):
    code, out, _ = run(capsys, "solve", TBT, "--property", "msd_l", "--trace")
    assert code == 0
    assert "stage 0: {T,M,B} | {L,R}" in out
    assert "outcome:" in out


def test_solve_json_lines(capsys):
    code, out, _ = run(capsys, "--format", "json-lines", "solve", PD)
    assert code == 0
    payload = json.loads(out.strip())
    assert payload["outcome"] == [["D"], ["D"]]
    assert payload["closure_ordinal"] == 1
    assert payload["property"] == ["sd_l", "sd_l"]


def test_solve_per_player_properties(capsys):
    code, out, _ = run(capsys, "solve", PD, "--property", "sd_l,br_g")
    assert code == 0
    assert "property: sd_l,br_g" in out


def test_solve_missing_file(capsys):
    code, _, err = run(capsys, "solve", str(DATA / "ghost.game"))
    assert code == 2
    assert "error:" in err


def test_solve_bad_property(capsys):
    code, _, err = run(capsys, "solve", PD, "--property", "zz")
    assert code == 2
    assert "unknown property" in err


# ---------- announce ----------


def test_announce_game_iterates(capsys):
    code, out, _ = run(capsys, "announce", PD, "--property", "sd_l")
    assert code == 0
    assert "rounds: 1" in out
    assert "terminal restriction: {D} | {D}" in out


def test_announce_rationality(capsys):
    code, out, _ = run(capsys, "announce", PD, "--property", "sd_g", "--rationality")
    assert code == 0
    assert "rounds: 1" in out


def test_announce_emit_model_round_trip(tmp_path, capsys):
    emitted = tmp_path / "terminal.emodel"
    code, _, _ = run(
        capsys, "announce", PD, "--property", "sd_l", "--emit-model", str(emitted)
    )
    assert code == 0
    assert emitted.exists()
    # the emitted model must load from its new location
    code, out, _ = run(
        capsys, "eval", str(emitted), "--formula", "nu x. O x", "--property", "sd_l"
    )
    assert code == 0
    assert "holds at: D,D" in out
    assert "valid: yes" in out


def test_announce_events_on_fig2(capsys):
    code, out, _ = run(capsys, "announce", FIG2, "--events", "w_ul|w_dr")
    assert code == 0
    assert "proper: no" in out
    assert "surviving states: (none)" in out
    assert "not a model of the announced restriction" in out


def test_announce_events_json(capsys):
    code, out, _ = run(
        capsys, "--format", "json-lines", "announce", FIG2, "--events", "w_ul|w_dr"
    )
    payload = json.loads(out.strip())
    assert payload["not_a_model_of_announced"] is True
    assert payload["states"] == []
    assert payload["announced_restriction"] == [["U"], ["R"]]


def test_announce_model_needs_events_or_property(capsys):
    code, _, err = run(capsys, "announce", FIG2)
    assert code == 2
    assert "--events or --property" in err


def test_announce_event_arity_checked(capsys):
    code, _, err = run(capsys, "announce", FIG2, "--events", "w_ul")
    assert code == 2
    assert "2 event groups" in err


def test_announce_rejects_other_extensions(capsys):
    code, _, err = run(capsys, "announce", DERIV)
    assert code == 2
    assert ".game or .emodel" in err


def test_announce_events_on_game_rejected(capsys):
    code, _, err = run(capsys, "announce", PD, "--events", "a|b")
    assert code == 2
    assert "model files" in err


# ---------- eval ----------


def test_eval_requires_property_for_rat(capsys):
    code, _, err = run(capsys, "eval", FIG2, "--formula", "rat")
    assert code == 2
    assert "supply --property" in err


def test_eval_free_variable_rejected(capsys):
    code, _, err = run(capsys, "eval", FIG2, "--formula", "x", "--property", "sd_l")
    assert code == 2
    assert "free fixpoint variable" in err


def test_eval_box_needs_correspondences(capsys):
    # fig2 is a bare model, so belief talk has nowhere to point
    code, _, err = run(capsys, "eval", FIG2, "--formula", "Box rat", "--property", "sd_l")
    assert code == 2
    assert "correspondences" in err


def test_eval_parse_error(capsys):
    code, _, err = run(capsys, "eval", FIG2, "--formula", "rat &")
    assert code == 2
    assert "error:" in err


def test_eval_json(capsys):
    # all payoffs tie in fig2, so weak dominance never bites and every state survives
    code, out, _ = run(
        capsys,
        "--format",
        "json-lines",
        "eval",
        FIG2,
        "--formula",
        "nu x. O x",
        "--property",
        "wd_l",
    )
    assert code == 0
    payload = json.loads(out.strip())
    assert payload["valid"] is True
    assert payload["holds_at"] == ["w_ul", "w_dr"]


# ---------- check ----------


def test_check_single_check(capsys):
    code, out, err = run(capsys, "check", "derivation_valid", "--random", "2")
    assert code == 0
    assert "PASS derivation_valid" in out
    assert "1 checks: 1 passed, 0 failed" in out
    assert "elapsed:" in err


def test_check_unknown_suite(capsys):
    code, _, err = run(capsys, "check", "mystery")
    assert code == 2
    assert "unknown suite or check" in err


def test_check_property_pool_enforced(capsys):
    code, _, err = run(capsys, "check", "epist1", "--property", "wd_g")
    assert code == 2
    assert "only accepts properties from" in err
    code, _, err = run(capsys, "check", "epist1", "--property", "zzz")
    assert code == 2
    assert "unknown property" in err


def test_check_json_lines(capsys):
    code, out, _ = run(
        capsys,
        "--format",
        "json-lines",
        "check",
        "derivation_valid",
        "--random",
        "1",
    )
    assert code == 0
    payload = json.loads(out.strip().splitlines()[0])
    assert payload["name"] == "derivation_valid"
    assert payload["passed"] is True


# ---------- derive ----------


def test_derive_valid_file(capsys):
    code, out, _ = run(capsys, "derive", DERIV)
    assert code == 0
    assert out.strip().splitlines()[-1] == "Valid"
    assert "step 1 ok:" in out


def test_derive_invalid_file(tmp_path, capsys):
    bad = tmp_path / "bad.deriv"
    bad.write_text("axiom nuDis psi=!x\n")
    code, out, _ = run(capsys, "derive", str(bad))
    assert code == 1
    assert out.strip().splitlines()[-1] == "Invalid"
    assert "FAILED" in out


def test_derive_format_error(tmp_path, capsys):
    bad = tmp_path / "bad.deriv"
    bad.write_text("lemma huh\n")
    code, _, err = run(capsys, "derive", str(bad))
    assert code == 2
    assert "unrecognized step" in err


def test_console_script_installed():
    exe = shutil.which("epigame")
    assert exe, "console script not on PATH"
    proc = subprocess.run(
        [exe, "--help"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert "solve" in proc.stdout
