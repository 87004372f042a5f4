"""Shared pytest scaffolding: collects acceptance verdicts for the summary.

Each acceptance test records one (name, passed, detail) triple through
``record``; a terminal-summary hook prints them as one PASS/FAIL line each
after the normal pytest output.
"""

VERDICTS: list[tuple[str, bool, str]] = []


def record(name: str, passed: bool, detail: str) -> None:
    """Store one acceptance verdict for the end-of-run summary."""
    VERDICTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in VERDICTS:
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{word} {name}: {detail}")
