"""Shared fixtures: bundled benchmark projects, their models, and gold sets."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"

sys.path.insert(0, str(Path(__file__).resolve().parent))

from corename.bench import BenchCase  # noqa: E402
from corename.minilang import build_model, load_layout  # noqa: E402

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def load_case(name: str) -> BenchCase:
    return BenchCase.from_json(str(FIXTURES / name / "case.json"))


def case_model(case: BenchCase):
    return build_model(load_layout(case.project_root, case.source_dirs))


@pytest.fixture(scope="session")
def decoy_case():
    return load_case("decoy")


@pytest.fixture
def decoy_model(decoy_case):
    return case_model(decoy_case)


@pytest.fixture(scope="session")
def swallow_case():
    return load_case("swallow_port")


@pytest.fixture
def swallow_model(swallow_case):
    return case_model(swallow_case)


@pytest.fixture(scope="session")
def flink_case():
    return load_case("flink_port")


@pytest.fixture
def flink_model(flink_case):
    return case_model(flink_case)


# One line per acceptance criterion, printed after the run so a reader can
# check the gate without digging through individual test output.
ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, ok: bool, detail: str) -> bool:
    ACCEPTANCE.append((name, bool(ok), detail))
    return bool(ok)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{word}  {name}: {detail}")
