from __future__ import annotations

import sys
from pathlib import Path

import pytest

from informledge import Store, default_relation_table, embed_corpus, parse_corpus

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
GOLDEN = TESTS / "golden"

# make oracles.py / scenario_search.py importable as plain modules
sys.path.insert(0, str(TESTS))


def load_corpus(name: str, store: Store | None = None, table=None):
    store = Store() if store is None else store
    table = table or default_relation_table()
    results = embed_corpus(store, parse_corpus((FIXTURES / name).read_text()), table)
    return store, results


@pytest.fixture
def table():
    return default_relation_table()


@pytest.fixture
def lion_store():
    store, _ = load_corpus("african_lion.ils")
    return store


_acceptance: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, name in _acceptance.values():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'} {name}")
