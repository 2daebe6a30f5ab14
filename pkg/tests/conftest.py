import pytest


@pytest.hookimpl(trylast=True)
def pytest_runtest_logreport(report):
    """Print one PASS/FAIL line per acceptance criterion, capture or not."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].replace("test_criterion_", "")
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {outcome}", flush=True)
