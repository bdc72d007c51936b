import itertools
import math
import sys
from pathlib import Path

import pytest

from hyperham.hypergraph import Hypergraph

sys.path.insert(0, str(Path(__file__).parent))


def naive_spans(edges, t, k, ell, a, x):
    """Independent re-implementation: every pattern edge maps onto an edge of H."""
    step = k - ell
    for i in range(a):
        window = t[x + i * step : x + i * step + k]
        if tuple(sorted(window)) not in edges:
            return False
    return True


def brute_min_degree(h: Hypergraph, d: int) -> int:
    best = math.inf
    for s in itertools.combinations(range(h.n), d):
        cnt = sum(1 for e in h.edges if set(s) <= set(e))
        best = min(best, cnt)
    return int(best)


def single_tight_path(n: int, length: int) -> Hypergraph:
    """Edges (i, i+1, i+2) for i < length: a tight path on length+2 vertices."""
    return Hypergraph(3, n, [(i, i + 1, i + 2) for i in range(length)])


@pytest.fixture
def k3_complete_12():
    return Hypergraph.complete(3, 12)
