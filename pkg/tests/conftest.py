import sys
from pathlib import Path

import pytest

from boxfold.solver import SolverConfig, bundled_solver_command

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def solver_cfg(tmp_path):
    return SolverConfig(bundled_solver_command(), timeout=600, workdir=tmp_path)


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def fake_solver(tmp_path):
    """Write an executable python script acting as a solver; returns a command builder."""

    def make(body: str) -> list[str]:
        script = tmp_path / "fake_solver.py"
        script.write_text(body)
        return [sys.executable, str(script), "{cnf}"]

    return make


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; echoed at the end of the run."""

    def report(criterion: str, ok: bool | None, detail: str) -> None:
        verdict = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        line = f"criterion {criterion}: {verdict}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
