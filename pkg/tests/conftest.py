import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from plonkalog import builtin, parse_formula  # noqa: E402


@pytest.fixture(scope="session")
def BOOL():
    return builtin("BOOL")


@pytest.fixture(scope="session")
def DM():
    return builtin("DM")


@pytest.fixture(scope="session")
def P(BOOL):
    """Parse over BOOL (or another signature passed as ``sig``)."""

    def parse(text, sig=None):
        return parse_formula(text, sig or BOOL)

    return parse


@pytest.fixture(scope="session")
def star(P):
    return P("x /\\ (x \\/ y)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
