import pytest

from posetsat.family import to_mask


def sets_of(*groups):
    """Masks from element lists: ``sets_of([], [1], [1, 2])``."""
    return [to_mask(g) for g in groups]


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    # no test may touch the user's real cache file
    monkeypatch.setenv("POSETSAT_CACHE", str(tmp_path / "cache.jsonl"))


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion; printed at the end of the run."""
    state = {}

    def note(number, text):
        state["number"], state["text"] = number, text

    yield note
    if "number" in state:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        ACCEPTANCE_LINES[state["number"]] = f"criterion {state['number']:>2}: {'PASS' if ok else 'FAIL'}  {state['text']}"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
