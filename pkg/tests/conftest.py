def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for text in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(text)
