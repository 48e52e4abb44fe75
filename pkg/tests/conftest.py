"""Shared hooks: collect acceptance summary lines and print them at the end."""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance summary")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
