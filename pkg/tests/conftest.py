import pytest

from cqnc_budget.presets import fig2, fig4, table1

# criterion number -> list of (part, passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(criterion, part, passed, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p for _, p, _ in parts)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
        for part, passed, detail in parts:
            tr.write_line(f"    {part}: {'pass' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def p_fig2():
    return fig2()


@pytest.fixture
def p_fig4():
    return fig4()


@pytest.fixture
def p_table1():
    return table1()
