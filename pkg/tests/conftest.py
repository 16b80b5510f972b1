import random

import pytest
from hypothesis import strategies as st

from higman.prolimit import StableElement
from higman.word import Word


def letters(rank):
    return st.integers(1, rank).flatmap(lambda k: st.sampled_from([k, -k]))


def words(rank=3, max_len=6):
    return st.lists(letters(rank), max_size=max_len).map(Word)


def stables(rank=5, max_len=6):
    return words(rank, max_len).map(StableElement)


def random_word(rng, rank, max_len):
    return Word([rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(rng.randint(0, max_len))])


@pytest.fixture
def rng():
    return random.Random(20261016)


# --- acceptance summary ------------------------------------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        number, title = marker.args
        _criteria.append((number, title, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_criteria):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title} ({duration:.2f}s)")
