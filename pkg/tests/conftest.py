import pytest

from batchplate.formats import case_study
from batchplate.model import Instance, Part, Platform


@pytest.fixture(scope="session")
def case():
    return case_study()


@pytest.fixture
def bed200():
    return Platform("A1", 200, 200, 200)


def make_part(name, length, width, height=10, filling=0.5):
    return Part(name, length, width, height, filling)


def make_instance(dims, platform=(100, 100, 100), **kw):
    parts = [make_part(f"Q{i}", l, w, **kw) for i, (l, w) in enumerate(dims, start=1)]
    return Instance(Platform("T", *platform), parts)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Log one acceptance criterion outcome; the summary prints at session end."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
