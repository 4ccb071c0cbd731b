import pytest

from killedbrw.critical import critical_params
from killedbrw.laws import BATTERY, SUBCRITICAL

# acceptance criteria append (number, passed, detail) here; printed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture(params=SUBCRITICAL)
def sub_law(request):
    d = BATTERY[request.param]
    return request.param, d, critical_params(d)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
