import pytest

from qcap import queue_sim as qs

ACCEPTANCE_LINES = []


def record_criterion(number, name, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mm1_trace():
    """M/M/1 at load 0.5, delay convention, 10^6 stationary symbols."""
    return qs.simulate(qs.QueueConfig(0.5, n_symbols=1_010_000, warmup=10_000, seed=20240101))


@pytest.fixture(scope="session")
def short_mm1_trace():
    return qs.simulate(qs.QueueConfig(0.5, n_symbols=60_000, warmup=10_000, seed=7))
