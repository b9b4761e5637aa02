import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def theorem_a():
    from mollify.optimizer import evaluate_theorem_a
    return evaluate_theorem_a("7/64", 0.44, 23.0)


@pytest.fixture(scope="session")
def ramanujan_case():
    from mollify.optimizer import evaluate_theorem_a
    return evaluate_theorem_a(0, 0.45, 23.7)


# -- acceptance summary ---------------------------------------------------------

_GATE_KEY = pytest.StashKey[dict]()


class _Gate:
    def __init__(self, store: dict, criterion: str):
        self._store = store
        self._criterion = criterion

    def record(self, ok: bool, detail: str) -> bool:
        self._store[self._criterion] = (bool(ok), detail)
        print(f"{self._criterion} {'PASS' if ok else 'FAIL'}  {detail}")
        return ok


@pytest.fixture
def gate(request):
    store = request.config.stash.setdefault(_GATE_KEY, {})
    criterion = request.node.get_closest_marker("criterion").args[0]
    yield _Gate(store, criterion)
    if criterion not in store:
        store[criterion] = (False, "raised before a verdict was recorded")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion covered by a test")


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_GATE_KEY, None)
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(store, key=lambda k: int(k[1:])):
        ok, detail = store[key]
        terminalreporter.write_line(f"{key:<4} {'PASS' if ok else 'FAIL'}  {detail}")
