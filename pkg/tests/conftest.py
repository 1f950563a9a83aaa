import os

import pytest
from hypothesis import HealthCheck, settings

from fastrank.ff import PrimeField

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def F7():
    return PrimeField(7)


@pytest.fixture
def F():
    return PrimeField()


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the summary hook prints them all at the end."""
    store = request.config.stash.setdefault(_VERDICTS, [])

    def record(no, ok, detail):
        store.append((no, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_VERDICTS, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for no, ok, detail in sorted(rows):
        terminalreporter.write_line(f"criterion {no:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
