import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> [ok, detail]
_CRITERIA: dict[int, list] = {}


@pytest.fixture
def record_criterion():
    """Record a pass/fail line for an acceptance criterion.

    Several tests may report on the same criterion; it passes only if all do,
    and the detail of the first failure is kept.
    """

    def record(number: int, ok: bool, detail: str):
        entry = _CRITERIA.setdefault(number, [True, detail])
        if entry[0] and not ok:
            entry[1] = detail
        entry[0] = entry[0] and ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
