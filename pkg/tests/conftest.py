import json
import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from props import ACCEPTANCE, REGISTRY, entry, suite_of  # noqa: E402


def pytest_collection_modifyitems(session, config, items):
    # acceptance criterion 8 reads the property registry, so it goes last
    items.sort(key=lambda it: it.nodeid.split("::")[0].endswith("test_acceptance.py"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    suite = suite_of(getattr(item, "obj", None))
    t0 = time.perf_counter()
    yield
    if suite is not None:
        entry(suite)["wall"] += time.perf_counter() - t0


def pytest_sessionfinish(session, exitstatus):
    # lets a standalone acceptance run read counts from a child session
    out = os.environ.get("RESTRUCT_REGISTRY_OUT")
    if out:
        with open(out, "w") as fh:
            json.dump(REGISTRY, fh)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if REGISTRY:
        terminalreporter.section("property suites")
        for name in sorted(REGISTRY):
            e = REGISTRY[name]
            terminalreporter.write_line(f"{name}: {e['cases']} cases, {e['wall']:.2f} s")
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for n in sorted(ACCEPTANCE):
            ok, desc = ACCEPTANCE[n]
            terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {'PASS' if ok else 'FAIL'}: {desc}")
