"""Command-line interface: output formats, exit codes, golden stdout."""

import json

from critters.cli import main
from critters.levels import emit_level, get_builtin
from conftest import GOLDEN, golden_text


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exit_info:
        code = exit_info.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_loop_run_prints_the_scoreboard(capsys):
    code, out, _ = run_cli(capsys, "run", "--level", "loop-01",
                           "--tests", str(GOLDEN / "config_loop01_short.json"))
    assert code == 0
    assert out == golden_text("cli_run_loop01_short.txt")


def test_base_run_prints_715(capsys):
    code, out, _ = run_cli(capsys, "run", "--level", "base-01",
                           "--tests", str(GOLDEN / "config_base01_orange_portal.json"),
                           "--setup-seconds", "0")
    assert code == 0
    assert out == golden_text("cli_run_base01_orange.txt")


def test_stdout_is_stable_across_invocations(capsys):
    args = ("run", "--level", "loop-01",
            "--tests", str(GOLDEN / "config_loop01_short.json"), "--seed", "5")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_json_format_matches_the_text_totals(capsys):
    code, out, _ = run_cli(capsys, "run", "--level", "loop-01", "--format", "json",
                           "--tests", str(GOLDEN / "config_loop01_short.json"))
    assert code == 0
    payload = json.loads(out)
    assert payload["score"]["total"] == 1000
    assert payload["result"]["detected"] == 4


def test_missing_tests_flag_is_a_usage_error(capsys):
    code, _, _ = run_cli(capsys, "run", "--level", "loop-01")
    assert code == 2


def test_unreadable_tests_file_is_a_usage_error(capsys):
    code, _, _ = run_cli(capsys, "run", "--level", "loop-01",
                         "--tests", "/nonexistent/tests.json")
    assert code == 2


def test_invalid_tests_content_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "signposts": [{"signpost": 7, "test": json.loads(
            golden_text("test_berries_match_rounds.json"))}]
    }))
    code, _, err = run_cli(capsys, "run", "--level", "loop-01", "--tests", str(bad))
    assert code == 1
    assert "UnknownSignpost" in err


def test_validate_golden_level(capsys, tmp_path):
    level_file = tmp_path / "loop01.json"
    level_file.write_text(emit_level(get_builtin("loop-01")))
    code, out, _ = run_cli(capsys, "validate", str(level_file))
    assert code == 0
    assert "loop-01: ok" in out


def test_validate_broken_level_exits_one(capsys, tmp_path):
    doc = get_builtin("loop-01").to_jsonable()
    doc["board"]["width"] = 9
    level_file = tmp_path / "broken.json"
    level_file.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "validate", str(level_file))
    assert code == 1
    assert "BadDimensions" in out


def test_solve_emits_the_golden_assertion(capsys):
    code, out, _ = run_cli(capsys, "solve", "--level", "loop-01",
                           "--max-assertions", "1", "--max-depth", "0")
    assert code == 0
    assert out.strip() == golden_text("test_berries_match_rounds.json").strip()


def test_solve_reports_exhaustion(capsys):
    code, _, err = run_cli(capsys, "solve", "--level", "loop-02",
                           "--max-assertions", "1", "--max-depth", "0")
    assert code == 1
    assert "no adequate test" in err


def test_mutants_lists_the_catalog(capsys):
    code, out, _ = run_cli(capsys, "mutants", "--level", "loop-01")
    assert code == 0
    payload = json.loads(out)
    assert [m["id"] for m in payload["mutants"]] == [
        "greedy-picker", "empty-handed", "second-round-double", "final-round-slacker",
    ]


def test_mutants_generate_count_replacement(capsys):
    code, out, _ = run_cli(capsys, "mutants", "--level", "loop-01",
                           "--generate", "--operators", "countReplace")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["mutants"]) == 2


def test_replay_round_trip_and_tamper_detection(capsys, tmp_path):
    timeline_file = tmp_path / "timeline.json"
    code, _, _ = run_cli(capsys, "run", "--level", "loop-01",
                         "--tests", str(GOLDEN / "config_loop01_short.json"),
                         "--seed", "9", "--out", str(timeline_file))
    assert code == 0

    code, out, _ = run_cli(capsys, "replay", "--level", "loop-01",
                           "--tests", str(GOLDEN / "config_loop01_short.json"),
                           "--seed", "9", "--timeline", str(timeline_file))
    assert code == 0
    assert "ok" in out

    events = json.loads(timeline_file.read_text())
    events = [e for e in events if e["kind"] != "exitCrossing"]
    timeline_file.write_text(json.dumps(events))
    code, _, err = run_cli(capsys, "replay", "--level", "loop-01",
                           "--tests", str(GOLDEN / "config_loop01_short.json"),
                           "--seed", "9", "--timeline", str(timeline_file))
    assert code == 1
    assert "mismatch" in err


def test_validate_json_format(capsys, tmp_path):
    level_file = tmp_path / "loop01.json"
    level_file.write_text(emit_level(get_builtin("loop-01")))
    code, out, _ = run_cli(capsys, "validate", str(level_file), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"diagnostics": [], "level": "loop-01", "ok": True}


def test_replay_json_format(capsys, tmp_path):
    timeline_file = tmp_path / "timeline.json"
    run_cli(capsys, "run", "--level", "loop-01",
            "--tests", str(GOLDEN / "config_loop01_short.json"),
            "--seed", "2", "--out", str(timeline_file))
    code, out, _ = run_cli(capsys, "replay", "--level", "loop-01",
                           "--tests", str(GOLDEN / "config_loop01_short.json"),
                           "--seed", "2", "--timeline", str(timeline_file),
                           "--format", "json")
    assert code == 0
    assert json.loads(out) == {"verified": True}
