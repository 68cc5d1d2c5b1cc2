import numpy as np
import pytest

from dtqw.graphs import build_family

# Distance-regular graphs used across the suite (all vertex-transitive).
DRG_SPECS = [
    ("complete", 3),
    ("complete", 4),
    ("complete", 5),
    ("cycle", 6),
    ("petersen",),
    ("hamming", 2, 3),
    ("hamming", 3, 2),
    ("johnson", 5, 2),
    ("paley", 13),
]


def make(spec):
    return build_family(*spec)


@pytest.fixture(params=DRG_SPECS, ids=lambda s: "-".join(map(str, s)))
def drg_graph(request):
    return make(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
