"""Command line interface.

Subcommands: run (one session on a project), bench (score a suite of gold
sets), serve (interactive review session over HTTP), parse (resolve a
project and print what the model sees). Exit codes: 0 success, 1 session
error, 2 usage (argparse's own convention), 3 session aborted.
"""
from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .bench import BenchCase, report_as_dict, run_suite, score_session
from .engine import RenameRefactoring
from .feedback import GoldSet
from .minilang import (
    DECL_KINDS,
    DEFAULT_SOURCE_DIRS,
    MiniSyntaxError,
    ResolutionError,
    build_model,
    load_layout,
)
from .orchestrator import SeedRenameInvalid, SessionConfig, SessionResult, run_session

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_ABORTED = 3


def parse_seed(spec: str) -> RenameRefactoring:
    """Parse a file:line:old:new:kind seed spec."""
    parts = spec.rsplit(":", 4)
    if len(parts) != 5:
        raise argparse.ArgumentTypeError(
            "seed must look like path/to/File.mini:12:oldName:newName:kind"
        )
    file, line, old, new, kind = parts
    if not line.isdigit():
        raise argparse.ArgumentTypeError(f"seed line {line!r} is not a number")
    if kind not in DECL_KINDS:
        raise argparse.ArgumentTypeError(
            f"seed kind {kind!r} must be one of {', '.join(DECL_KINDS)}"
        )
    try:
        return RenameRefactoring(file, old, new, int(line), kind)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_project_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--project", required=True, help="project root directory")
    parser.add_argument(
        "--source-dir",
        action="append",
        dest="source_dirs",
        metavar="DIR",
        help="source dir under the root (repeatable; default src/main, src/test)",
    )


def _add_session_arguments(parser: argparse.ArgumentParser):
    _add_project_arguments(parser)
    parser.add_argument(
        "--seed",
        required=True,
        type=parse_seed,
        metavar="FILE:LINE:OLD:NEW:KIND",
        help="the seed rename, e.g. src/main/a/B.mini:4:oldName:newName:field",
    )
    parser.add_argument(
        "--reasoner", choices=("deterministic", "external"), default="deterministic"
    )
    parser.add_argument("--materialize", action="store_true", help="write files to disk")
    parser.add_argument("--no-replication", action="store_true")
    parser.add_argument(
        "--pre-applied",
        action="store_true",
        help="the seed rename is already present in the project text",
    )


def _load_model(args):
    source_dirs = tuple(args.source_dirs) if args.source_dirs else DEFAULT_SOURCE_DIRS
    layout = load_layout(args.project, source_dirs)
    if not layout.files:
        raise ResolutionError(args.project, 0, "", "no .mini files found")
    return build_model(layout)


def _write_session_dir(result: SessionResult, directory: str):
    """Transcript directory: event log, decision memory, cost counters."""
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "events.jsonl"), "w", encoding="utf-8") as fh:
        fh.write(result.events.to_jsonl())
    with open(os.path.join(directory, "memory.json"), "w", encoding="utf-8") as fh:
        examples = result.memory.examples() if result.memory else []
        json.dump([e.as_dict() for e in examples], fh, indent=2)
        fh.write("\n")
    with open(os.path.join(directory, "counters.json"), "w", encoding="utf-8") as fh:
        json.dump(result.counters, fh, indent=2)
        fh.write("\n")


def _cmd_run(args) -> int:
    if args.interactive:
        return _cmd_serve(args)
    model = _load_model(args)
    gold = GoldSet.from_json(args.oracle) if args.oracle else None
    config = SessionConfig(
        feedback_mode="oracle" if gold else "auto_accept",
        reasoner_mode=args.reasoner,
        materialize=args.materialize,
        replication_enabled=not args.no_replication,
        seed_pre_applied=args.pre_applied,
    )
    result = run_session(model, args.seed, config, gold=gold)
    if args.session_dir:
        _write_session_dir(result, args.session_dir)
    scored = score_session(result, gold) if gold else None
    if args.json:
        payload = {
            "status": result.status,
            "applied": [r.as_dict() for r in result.changes.applied],
            "comment_edits": len(result.changes.comment_edits),
            "files_visited": result.visited,
            "scope": result.scope.as_dict(),
            "discovery_rounds": result.discovery_rounds_used,
            "reasoner_degraded": result.reasoner_degraded,
            "counters": result.counters,
        }
        if scored:
            payload["metrics"] = scored["metrics"].as_dict()
            payload["acceptance_rate"] = float(scored["acceptance_rate"])
        print(json.dumps(payload, indent=2))
    else:
        print(f"status: {result.status}")
        print(f"scope: {result.scope.describe()}")
        print(f"files visited: {len(result.visited)}")
        print(f"renames applied: {len(result.changes.applied)}")
        for rename in result.changes.applied:
            print(
                f"  {rename.file_path}:{rename.line_number} "
                f"{rename.identifier_type} {rename.old_name} -> {rename.new_name}"
            )
        print(f"comment edits: {len(result.changes.comment_edits)}")
        if scored:
            m = scored["metrics"]
            print(
                f"metrics: P={m.precision} R={m.recall} F1={m.f1} "
                f"(tp={m.tp} fp={m.fp} fn={m.fn})"
            )
    return EXIT_ABORTED if result.status == "aborted" else EXIT_OK


def _cmd_bench(args) -> int:
    # a suite is a directory of case directories, each with a case.json
    paths = sorted(glob.glob(os.path.join(args.suite, "*", "case.json")))
    cases = [BenchCase.from_json(path) for path in paths]
    config = SessionConfig(
        feedback_mode="oracle",
        replication_enabled=not args.no_replication,
    )
    report = run_suite(cases, config)
    payload = report_as_dict(report)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for case in payload["cases"]:
            _print_case(case)
        micro = payload["micro"]
        print(
            f"micro: P={micro['precision_exact']} R={micro['recall_exact']} "
            f"F1={micro['f1_exact']} over {len(cases)} case(s)"
        )
    return EXIT_OK


def _print_case(case: dict):
    m = case["metrics"]
    print(
        f"{case['name']}: P={m['precision_exact']} R={m['recall_exact']} "
        f"F1={m['f1_exact']} (tp={m['tp']} fp={m['fp']} fn={m['fn']}) "
        f"acceptance={case['acceptance_rate']:.3f} "
        f"files={case['files_visited']} {case['seconds']:.2f}s"
    )


def _cmd_serve(args) -> int:
    from .service import serve

    model = _load_model(args)
    config = SessionConfig(
        feedback_mode="interactive",
        reasoner_mode=args.reasoner,
        materialize=args.materialize,
        replication_enabled=not args.no_replication,
        seed_pre_applied=args.pre_applied,
        logical_clock=False,
    )
    host = getattr(args, "host", "127.0.0.1")
    port = getattr(args, "port", 8787)
    print(f"review service on http://{host}:{port}")
    serve(model, args.seed, config, host=host, port=port)
    return EXIT_OK


def _cmd_parse(args) -> int:
    model = _load_model(args)
    kinds = {kind: 0 for kind in DECL_KINDS}
    for decl in model.declarations:
        kinds[decl.kind] += 1
    if args.json:
        print(
            json.dumps(
                {
                    "files": [f.path for f in model.layout.files],
                    "declarations": kinds,
                    "references": len(model.references),
                    "statements": len(model.statements),
                    "classes": sorted(model.classes),
                },
                indent=2,
            )
        )
    else:
        print(f"files: {len(model.layout.files)}")
        for kind in DECL_KINDS:
            print(f"{kind}: {kinds[kind]}")
        print(f"references: {len(model.references)}")
        print(f"statements: {len(model.statements)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corename",
        description="coordinated rename sessions on MiniLang projects",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one session")
    _add_session_arguments(run_p)
    feedback = run_p.add_mutually_exclusive_group()
    feedback.add_argument(
        "--oracle", metavar="GOLD.json", help="simulate the human from a gold set"
    )
    feedback.add_argument(
        "--auto-accept", action="store_true", help="accept every suggestion (default)"
    )
    feedback.add_argument(
        "--interactive",
        action="store_true",
        help="serve the session for review instead of deciding locally",
    )
    run_p.add_argument("--session-dir", help="write events/memory/counters here")
    run_p.add_argument("--json", action="store_true")
    run_p.set_defaults(func=_cmd_run)

    bench_p = sub.add_parser("bench", help="score a suite of gold sets")
    bench_p.add_argument(
        "--suite", required=True, help="directory of bench case JSON files"
    )
    bench_p.add_argument("--no-replication", action="store_true")
    bench_p.add_argument("--json", action="store_true")
    bench_p.set_defaults(func=_cmd_bench)

    serve_p = sub.add_parser("serve", help="interactive review session over HTTP")
    _add_session_arguments(serve_p)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", default=8787, type=int)
    serve_p.set_defaults(func=_cmd_serve)

    parse_p = sub.add_parser("parse", help="resolve a project and print a summary")
    _add_project_arguments(parse_p)
    parse_p.add_argument("--json", action="store_true")
    parse_p.set_defaults(func=_cmd_parse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MiniSyntaxError, ResolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SeedRenameInvalid as exc:
        print(f"seed rename rejected: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (FileNotFoundError, NotADirectoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
