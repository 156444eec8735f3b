from __future__ import annotations

import pytest

from pathlock import example_cm, example_da
from pathlock.harness import accepts
from pathlock.words import enumerate_words


def disagreements(a, b, alphabet, max_len):
    """Words up to ``max_len`` on which two devices disagree."""
    return [w for w in enumerate_words(alphabet, max_len) if accepts(a, w) != accepts(b, w)]


@pytest.fixture(scope="session")
def running_cm():
    return example_cm()


@pytest.fixture(scope="session")
def running_da():
    return example_da()


# acceptance criteria report their outcome here; printed once at the end of the session
CRITERIA: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[number])
