"""Shared fixtures: the acceptance-criterion recorder.

Each acceptance test opens one criterion context, computes its verdict,
and sets ok/detail; the terminal summary then prints exactly one
PASS/FAIL line per criterion, whether or not the test body raised.
"""

import contextlib

import pytest

_LINES: list[tuple[int, str]] = []


def _record(num: int, name: str, ok: bool, detail: str) -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    _LINES.append((num, f"criterion {num:02d} {name}: {tag}{suffix}"))


class CriterionResult:
    def __init__(self):
        self.ok = False
        self.detail = ""

    def set(self, ok, detail: str = "") -> None:
        self.ok = bool(ok)
        self.detail = detail


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def open_criterion(num: int, name: str):
        res = CriterionResult()
        try:
            yield res
        except Exception as exc:
            _record(num, name, False, f"error: {exc!r:.160s}")
            raise
        _record(num, name, res.ok, res.detail)
        assert res.ok, f"criterion {num} ({name}): {res.detail}"

    return open_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
