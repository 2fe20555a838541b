import pytest

from fixerlab.ffield import get_field


@pytest.fixture(params=[4, 8, 9, 16, 25, 27, 32, 49, 64, 81])
def field(request):
    return get_field(request.param)


# ---------------------------------------------------------------- acceptance lines
# Tests marked ``criterion(n)`` contribute to one summary line per criterion.
# A test may attach a short detail string through ``record_property("detail", ...)``.

_CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        detail = dict(item.user_properties).get("detail", "")
        if rep.failed and not detail:
            detail = str(rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash") else rep.longrepr).splitlines()[0]
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ok = all(p for _, p, _ in parts)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({sum(p for _, p, _ in parts)}/{len(parts)} checks)")
        for name, passed, detail in parts:
            if not passed or detail:
                tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {name}: {detail}")
