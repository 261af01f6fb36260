import time

import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


class Criterion:
    def __init__(self, number: int, title: str, budget_s: float | None):
        self.number = number
        self.title = title
        self.budget_s = budget_s
        self.notes: list[str] = []
        self._t0 = time.perf_counter()

    def note(self, text: str) -> None:
        self.notes.append(text)

    def check(self, ok: bool, text: str) -> None:
        self.notes.append(("ok: " if ok else "FAILED: ") + text)
        assert ok, text

    def finish(self, passed: bool) -> None:
        elapsed = time.perf_counter() - self._t0
        detail = "; ".join(self.notes)
        if self.budget_s is not None:
            detail += f"; {elapsed:.2f}s (limit {self.budget_s:g}s)"
            if elapsed > self.budget_s:
                passed = False
        _RESULTS[self.number] = (passed, f"{self.title}: {detail}")
        return passed


@pytest.fixture
def criterion(request):
    holder = {}

    def make(number, title, budget_s=None):
        holder["c"] = Criterion(number, title, budget_s)
        return holder["c"]

    yield make
    c = holder.get("c")
    if c is None:
        return
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    if not c.finish(passed) and passed:
        pytest.fail(f"criterion {c.number} exceeded its {c.budget_s:g}s runtime limit")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, line = _RESULTS[number]
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {line}")
