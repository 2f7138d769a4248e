import pytest

from pdmwell import PhysicalParams

SWEEP = (-0.5, 0.5, 1.0, 5.0)


@pytest.fixture
def unit():
    """hbar = m = L = 1, gamma L = 1."""
    return PhysicalParams(gamma=1.0)


@pytest.fixture(params=SWEEP, ids=lambda g: f"gL={g}")
def swept(request):
    return PhysicalParams.from_gamma_tilde(request.param)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record and print one pass/fail line per acceptance criterion."""

    def report(label: str, passed: bool, detail: str) -> bool:
        line = f"{label}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
