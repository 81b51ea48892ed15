import numpy as np
import pytest

from hyjump.sampling import TimeGrid
from hyjump.simulate import ObservedPath


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def grid(*times, n=None):
    return TimeGrid(np.array(times, dtype=float), n or max(len(times) - 1, 1))


def path_from_increments(times, increments, component=1):
    values = np.concatenate([[0.0], np.cumsum(increments)])
    return ObservedPath(grid(*times), values, component)


def random_grid(rng, n_points):
    inner = np.sort(rng.choice(np.arange(1, 4 * n_points), size=n_points - 2, replace=False)) / (4 * n_points)
    return TimeGrid(np.concatenate([[0.0], inner, [1.0]]), n_points)


def random_path(rng, g, component=1):
    values = np.concatenate([[0.0], np.cumsum(rng.standard_normal(len(g) - 1))])
    return ObservedPath(g, values, component)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; printed at session end."""

    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
