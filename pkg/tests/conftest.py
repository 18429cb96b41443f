import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance_log.RESULTS, key=lambda k: (len(k), k)):
        status, title, detail = acceptance_log.RESULTS[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {title}{' - ' + detail if detail else ''}")
