import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nkhyper import quat

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def gen():
    return quat.rng(20240, 0)


# -- acceptance summary -----------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "notes": []})
    entry["ok"] &= rep.passed
    entry["notes"] += [str(v) for k, v in item.user_properties if k == "measured" and rep.when == "call"]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        line = f"{'PASS' if e['ok'] else 'FAIL'} criterion {n}: {e['title']}"
        terminalreporter.write_line(line)
        for note in e["notes"]:
            terminalreporter.write_line(f"    {note}")
