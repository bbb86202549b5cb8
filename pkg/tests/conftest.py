import mpmath as mp
import pytest


@pytest.fixture(autouse=True)
def test_precision():
    # library calls set their own precision; this only covers arithmetic in the tests
    with mp.workdps(40):
        yield


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
