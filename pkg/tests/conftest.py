"""Shared fixtures: fixture paths, a mock completion server, and the
acceptance-criteria result lines printed at the end of the run."""

import threading
from contextlib import contextmanager
from pathlib import Path

import pytest

from storymetrics import mockserver

FIXTURES = Path(__file__).parent / "fixtures"

# (criterion, "PASS"/"FAIL") tuples recorded by the acceptance tests.
ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@contextmanager
def criterion(name: str):
    """Record one acceptance criterion's outcome for the end-of-run summary."""
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((name, "FAIL"))
        raise
    ACCEPTANCE_RESULTS.append((name, "PASS"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {name}")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def completion_endpoint():
    """A live deterministic completion endpoint on an ephemeral port."""
    server = mockserver.serve(0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}/"
    server.shutdown()
