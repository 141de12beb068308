#!/usr/bin/env python3
"""Ablation table over the bundled fixture cases.

Runs every case three ways: full (oracle review + replication), without
review (auto-accept), and without replication (oracle review, seed file
only), then prints exact precision/recall/F1 per arm.
"""
from __future__ import annotations

import argparse
import glob
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from corename.bench import BenchCase, score_session
from corename.feedback import OracleFeedback
from corename.minilang import build_model, load_layout
from corename.orchestrator import SessionConfig, run_session

ARMS = {
    "full": SessionConfig(feedback_mode="oracle"),
    "no-review": SessionConfig(feedback_mode="auto_accept"),
    "no-replication": SessionConfig(feedback_mode="oracle", replication_enabled=False),
}


def run_arm(case: BenchCase, config: SessionConfig) -> dict:
    model = build_model(load_layout(case.project_root, case.source_dirs))
    feedback = (
        OracleFeedback(case.gold) if config.feedback_mode == "oracle" else None
    )
    result = run_session(model, case.seed, config, feedback=feedback)
    return score_session(result, case.gold)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--suite",
        default=os.path.join(os.path.dirname(__file__), "..", "fixtures"),
        help="directory of bench case directories",
    )
    args = parser.parse_args()

    paths = sorted(glob.glob(os.path.join(args.suite, "*", "case.json")))
    if not paths:
        print(f"no cases under {args.suite}", file=sys.stderr)
        return 1
    cases = [BenchCase.from_json(path) for path in paths]

    header = f"{'case':<14} {'arm':<16} {'P':>6} {'R':>6} {'F1':>6}   tp/fp/fn"
    print(header)
    print("-" * len(header))
    for case in cases:
        for arm, config in ARMS.items():
            m = run_arm(case, config)["metrics"]
            print(
                f"{case.name:<14} {arm:<16} {str(m.precision):>6} "
                f"{str(m.recall):>6} {str(m.f1):>6}   {m.tp}/{m.fp}/{m.fn}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
