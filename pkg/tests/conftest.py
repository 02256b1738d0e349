from pathlib import Path

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# the acceptance tests append their verdict lines here; echoed after the
# run so they survive output capture
VERDICT_FILE = Path(__file__).parent / ".acceptance_verdicts.txt"


def pytest_sessionstart(session):
    VERDICT_FILE.unlink(missing_ok=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICT_FILE.exists():
        terminalreporter.section("acceptance criteria")
        for line in VERDICT_FILE.read_text().splitlines():
            terminalreporter.write_line(line)
