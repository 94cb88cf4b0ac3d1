import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def ket():
    def make(*amps):
        v = np.array(amps, dtype=complex)
        return v / np.linalg.norm(v)
    return make


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    state = {}

    def report(label, detail):
        state["label"], state["detail"] = label, detail

    yield report
    if "label" in state:
        rep = getattr(request.node, "rep_call", None)
        status = "PASS" if rep is not None and rep.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] {state['label']}: {state['detail']}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
