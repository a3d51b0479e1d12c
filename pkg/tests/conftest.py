from __future__ import annotations

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def acceptance(request):
    """Return ``record(criterion, passed, detail)``; prints and keeps one line per criterion."""

    def record(criterion: int, passed: bool, detail: str) -> bool:
        line = f"acceptance {criterion:>2}  {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        request.config.stash[_LINES].append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
