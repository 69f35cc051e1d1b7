import pytest

from macfrac.mpnum import precision


@pytest.fixture(scope="session")
def ctx():
    return precision(100)


@pytest.fixture(scope="session")
def ctx40():
    return precision(40)


def ulps(ctx, value, reference):
    """|value - reference| in units of the last place of ``reference`` at ctx precision."""
    mp = ctx.mp
    value, reference = ctx.mpf(value), ctx.mpf(reference)
    if reference == 0:
        return abs(value) / mp.ldexp(1, -mp.prec)
    return abs(value - reference) / mp.ldexp(1, mp.mag(reference) - mp.prec)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record a one-line verdict for an acceptance criterion, then assert it."""

    def record(label, passed, detail=""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")
        assert passed, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
