import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Replay the acceptance verdict lines where capture cannot hide them."""
    mod = (sys.modules.get("test_acceptance")
           or sys.modules.get("tests.test_acceptance"))
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, text in sorted(mod.RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[criterion {num:02d}] {verdict} {text}")
    for line in getattr(mod, "LOGS", []):
        terminalreporter.write_line(f"[criterion 10 log] {line}")
