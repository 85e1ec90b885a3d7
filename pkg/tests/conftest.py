from helpers import ACCEPTANCE

N_CRITERIA = 10


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, N_CRITERIA + 1):
        if k in ACCEPTANCE:
            title, ok, detail = ACCEPTANCE[k]
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {title}: {detail}")
        else:
            terminalreporter.write_line(f"[FAIL] {k:2d}. not run or raised before reporting")
