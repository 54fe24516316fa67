import _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = _report.collected()
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for index, title, passed, detail in lines:
        status = "PASS" if passed else "FAIL"
        text = f"[{status}] criterion {index:2d}: {title}"
        if detail:
            text += f"  [{detail}]"
        terminalreporter.write_line(text, green=passed, red=not passed)
