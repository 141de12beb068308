#!/usr/bin/env python3
"""Session wall time as generated project size grows."""
from __future__ import annotations

import argparse
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from corename.minilang import build_model, layout_from_texts
from corename.orchestrator import SessionConfig, run_session
from corename.projgen import generate_project


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--sizes",
        type=int,
        nargs="+",
        default=[500, 1000, 2500, 5000, 10000],
        metavar="LINES",
    )
    parser.add_argument("--seed", type=int, default=41)
    args = parser.parse_args()

    print(f"{'target':>8} {'lines':>8} {'files':>6} {'visited':>8} "
          f"{'applied':>8} {'seconds':>8}")
    for target in args.sizes:
        project = generate_project(random.Random(args.seed), target_lines=target)
        model = build_model(layout_from_texts(project.texts))
        lines = sum(text.count("\n") for text in project.texts.values())
        started = time.perf_counter()
        result = run_session(
            model, project.seed, SessionConfig(feedback_mode="auto_accept")
        )
        elapsed = time.perf_counter() - started
        print(
            f"{target:>8} {lines:>8} {len(project.texts):>6} "
            f"{len(result.visited):>8} {len(result.changes.applied):>8} "
            f"{elapsed:>8.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
