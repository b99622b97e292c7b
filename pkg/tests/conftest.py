"""Shared pytest wiring for the acceptance summary block.

The acceptance tests record one line per criterion; the terminal-summary
hook prints them as a block at the end of the run so a plain ``pytest -v``
shows the verdicts without digging through captured output.
"""

import time
from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Context manager recording a pass/fail line for one criterion."""

    @contextmanager
    def run(number, description):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            elapsed = time.perf_counter() - start
            ACCEPTANCE_LINES.append(
                f"criterion {number:2d}: FAIL  {description}  ({elapsed:.2f} s)"
            )
            raise
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(
            f"criterion {number:2d}: PASS  {description}  ({elapsed:.2f} s)"
        )

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
