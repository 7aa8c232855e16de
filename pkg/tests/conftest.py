import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def simple_vars():
    from coprimelab.laurent import LaurentPoly, VariableTable
    table = VariableTable(["y0", "y1"])
    return table, LaurentPoly.variable(table, "y0"), LaurentPoly.variable(table, "y1")


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance(request):
    """criterion number -> list of (label, ok, detail); printed after the run."""
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        parts = results[num]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label}: {'ok' if good else 'FAIL'} ({info})" for label, good, info in parts)
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
