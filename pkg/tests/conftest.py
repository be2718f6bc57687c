import os

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criteria report: (number, title, passed, detail)
CRITERIA: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, detail in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if passed else 'FAIL'}  {title}  [{detail}]")
