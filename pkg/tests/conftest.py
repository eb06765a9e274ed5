import numpy as np
import pytest

from spaceform.calculus import ChartGrid, MetricField


def metric_field(g):
    """MetricField from a sampled ``(..., m, m)`` metric array."""
    g = np.asarray(g, dtype=float)
    return MetricField(g, np.linalg.inv(g), np.linalg.det(g))


def diag_metric(*diag):
    diag = np.broadcast_arrays(*diag)
    m = len(diag)
    g = np.zeros(diag[0].shape + (m, m))
    for i, d in enumerate(diag):
        g[..., i, i] = d
    return g


def interior(a, k=4):
    """Drop ``k`` boundary layers on both ends of the first two axes."""
    return a[k:-k, k:-k]


@pytest.fixture
def rng():
    return np.random.default_rng(20241017)


@pytest.fixture
def flat_grid():
    return ChartGrid([(-1.0, 1.0), (-1.0, 1.0)], (41, 41))


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
