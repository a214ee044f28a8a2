"""Shared test plumbing: a recorder that prints one PASS/FAIL line per
acceptance criterion in the terminal summary, visible with plain `pytest -v`
(captured stdout would only show on failures)."""

ACCEPTANCE_LINES = []


def record_acceptance(number: int, ok: bool, detail: str) -> str:
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append((number, line))
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
