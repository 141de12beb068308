"""The command line: wiring, artifacts, exit codes."""
from __future__ import annotations

import argparse
import json

import pytest

from corename.cli import (
    EXIT_ABORTED,
    EXIT_ERROR,
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_seed,
)
from corename.engine import RenameRefactoring
from corename.events import events_from_jsonl
from corename.logcheck import validate_jsonl
from corename.minilang import DECL_KINDS

from conftest import FIXTURES

DECOY_PROJECT = str(FIXTURES / "decoy" / "project")
DECOY_GOLD = str(FIXTURES / "decoy" / "gold.json")
DECOY_SEED = "src/main/app/core/Cache.mini:2:Cache:Buffer:class"


def run_decoy(*extra: str) -> int:
    argv = ["run", "--project", DECOY_PROJECT, "--seed", DECOY_SEED]
    return main(argv + list(extra))


def test_exit_codes_are_pinned():
    assert (EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_ABORTED) == (0, 1, 2, 3)


def test_parse_seed_round_trip():
    seed = parse_seed(DECOY_SEED)
    assert seed == RenameRefactoring(
        "src/main/app/core/Cache.mini", "Cache", "Buffer", 2, "class"
    )


def test_parse_seed_rejects_malformed_specs():
    for spec in (
        "too:few",
        "a.mini:notaline:x:y:field",
        "a.mini:3:x:y:spaceship",
        "a.mini:3:x:x:field",  # old == new
    ):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_seed(spec)


def test_parse_command_prints_a_model_summary(capsys):
    assert main(["parse", "--project", DECOY_PROJECT]) == EXIT_OK
    out = capsys.readouterr().out
    assert "files: 2" in out
    for kind in DECL_KINDS:
        assert f"{kind}: " in out


def test_parse_command_json(capsys):
    assert main(["parse", "--project", DECOY_PROJECT, "--json"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["files"] == [
        "src/main/app/core/Cache.mini",
        "src/main/app/ops/Registry.mini",
    ]
    assert body["declarations"]["class"] == 2
    assert sorted(body["classes"]) == ["Cache", "Registry"]
    assert body["references"] > 0


def test_run_with_an_oracle_reports_exact_metrics(capsys):
    assert run_decoy("--oracle", DECOY_GOLD, "--json") == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["status"] == "finished"
    assert len(body["applied"]) == 4
    assert body["metrics"]["precision_exact"] == "1"
    assert body["metrics"]["recall_exact"] == "1"
    assert body["counters"]["actions"] == 13
    assert body["scope"]["revision"] == 2


def test_run_without_an_oracle_auto_accepts(capsys):
    assert run_decoy() == EXIT_OK
    out = capsys.readouterr().out
    assert "status: finished" in out
    assert "renames applied: 6" in out  # the decoys land too
    assert "metrics" not in out


def test_run_writes_the_session_transcript(tmp_path, capsys):
    session_dir = tmp_path / "transcript"
    assert (
        run_decoy("--oracle", DECOY_GOLD, "--session-dir", str(session_dir))
        == EXIT_OK
    )
    capsys.readouterr()

    events_text = (session_dir / "events.jsonl").read_text()
    assert validate_jsonl(events_text) == []
    events = events_from_jsonl(events_text)
    assert events[0].type == "session_started"
    assert events[-1].type == "session_finished"

    memory = json.loads((session_dir / "memory.json").read_text())
    assert len(memory) == 6  # synthetic seed plus five reviewed suggestions
    assert all(set(row) == {"rename", "label"} for row in memory)

    counters = json.loads((session_dir / "counters.json").read_text())
    assert counters == {
        "llm_calls": 8,
        "tool_calls": 5,
        "files_inspected": 2,
        "suggestions_offered": 5,
        "accepted": 3,
        "rejected": 2,
        "actions": 13,
    }


def test_bench_command_scores_the_fixture_suite(capsys):
    assert main(["bench", "--suite", str(FIXTURES)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "micro: P=1 R=9/10 F1=18/19 over 3 case(s)" in out


def test_bench_command_json(capsys):
    assert main(["bench", "--suite", str(FIXTURES), "--json"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert [case["name"] for case in body["cases"]] == [
        "decoy",
        "flink_port",
        "swallow_port",
    ]
    assert body["micro"]["recall_exact"] == "9/10"
    assert body["micro"]["tp"] == 27


def test_a_missing_project_exits_with_an_error(capsys):
    code = main(
        ["run", "--project", "/nowhere/at/all", "--seed", DECOY_SEED]
    )
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_an_unresolvable_seed_exits_with_an_error(capsys):
    code = main(
        [
            "run",
            "--project",
            DECOY_PROJECT,
            "--seed",
            "src/main/app/core/Cache.mini:2:Ghost:Spirit:class",
        ]
    )
    assert code == EXIT_ERROR
    assert capsys.readouterr().err != ""


def test_a_broken_source_file_exits_with_an_error(tmp_path, capsys):
    bad = tmp_path / "src" / "main" / "app"
    bad.mkdir(parents=True)
    (bad / "Broken.mini").write_text("public class {\n")
    code = main(
        [
            "run",
            "--project",
            str(tmp_path),
            "--seed",
            "src/main/app/Broken.mini:1:x:y:field",
        ]
    )
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_usage_errors_exit_via_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--project", DECOY_PROJECT, "--seed", "not-a-seed"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()
