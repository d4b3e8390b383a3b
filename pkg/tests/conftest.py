"""Shared pytest plumbing.

The acceptance tests record one verdict line each; echoing them from the
terminal-summary hook makes a full run end with a readable checklist even
though passing tests normally swallow their stdout.
"""

ACCEPTANCE_LINES = []


def record_verdict(line):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance checklist")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
