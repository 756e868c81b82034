import numpy as np
import pytest

# Reference solutions polished to full double precision with an analytic
# full-residual Jacobian (G is smooth near both solutions).
EX1_STAR = np.array([0.8946553733346868, 0.32782652174629745])
EX2_STAR = np.array([0.74862800523263, 0.43039151113230756])
EX2_OBJECTIVE = 0.040469349411551614

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the terminal summary."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA[name] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = _CRITERIA[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else ""))
