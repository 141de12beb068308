#!/usr/bin/env python3
"""Randomized session safety sweep.

Generates projects, runs an auto-accept session on each (with and without
replication, plus a tight file cap), and checks that every session finishes,
its event log validates, and the final text still parses and binds. Exits
nonzero on the first batch with defects.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from corename.logcheck import validate_events
from corename.minilang import build_model, layout_from_texts
from corename.orchestrator import SessionConfig, run_session
from corename.projgen import generate_project

VARIANTS = (
    SessionConfig(feedback_mode="auto_accept"),
    SessionConfig(feedback_mode="auto_accept", replication_enabled=False),
    SessionConfig(feedback_mode="auto_accept", file_plan_cap=2),
)


def check(result) -> str | None:
    if result.status != "finished":
        return f"status {result.status}"
    findings = validate_events(result.events.snapshot())
    if findings:
        return f"log findings: {findings[:2]}"
    try:
        build_model(
            layout_from_texts({f.path: f.text for f in result.model.layout.files})
        )
    except Exception as exc:  # any parse/bind break is a defect
        return f"final text does not rebind: {exc}"
    return None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--projects", type=int, default=334)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    defects: list[str] = []
    sessions = 0
    started = time.perf_counter()
    for index in range(args.projects):
        project = generate_project(
            random.Random(rng.randrange(2**32)),
            packages=rng.randint(1, 3),
            classes_per_package=rng.randint(2, 4),
            density=rng.uniform(0.15, 0.7),
            with_tests=rng.random() < 0.5,
        )
        model = build_model(layout_from_texts(project.texts))
        for config in VARIANTS:
            result = run_session(model, project.seed, config)
            sessions += 1
            defect = check(result)
            if defect:
                defects.append(f"project {index}: {defect}")
        if (index + 1) % 50 == 0:
            elapsed = time.perf_counter() - started
            print(
                f"{index + 1}/{args.projects} projects, {sessions} sessions, "
                f"{elapsed:.1f}s, {len(defects)} defect(s)"
            )
    elapsed = time.perf_counter() - started
    print(f"done: {sessions} sessions in {elapsed:.1f}s, {len(defects)} defect(s)")
    for line in defects:
        print(f"  {line}", file=sys.stderr)
    return 1 if defects else 0


if __name__ == "__main__":
    raise SystemExit(main())
