from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and assert it."""

    def record(number: int, title: str, failures: list[str], cases: int) -> None:
        status = "PASS" if not failures else "FAIL"
        line = f"{status} criterion {number}: {title} ({cases} cases)"
        if failures:
            line += f" first failure: {failures[0]}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failures, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
