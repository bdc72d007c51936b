import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperham.hypergraph import ArityError, Hypergraph, HypergraphError
from hyperham.random_models import RandomSpec, extremal_h0, gnp
from hyperham.shaving import classify_vertices, shave


def ell_degrees(h, ell):
    return {s: h.degree(s) for s in itertools.combinations(range(h.n), ell)}


@st.composite
def sparse_graphs(draw):
    n = draw(st.integers(5, 12))
    p = draw(st.floats(0.05, 0.5))
    seed = draw(st.integers(0, 2**32))
    return gnp(RandomSpec(n, 3, p, seed))


def test_complete_untouched():
    res = shave(Hypergraph.complete(3, 6), 2, 2)
    assert res.shaved == Hypergraph.complete(3, 6)
    assert res.edges_removed == 0


def test_single_edge_erased():
    res = shave(Hypergraph(3, 5, [(0, 1, 2)]), 2, 2)
    assert len(res.shaved) == 0


def test_h0_untouched():
    h = extremal_h0(10, 3, 0.2)
    assert set(ell_degrees(h, 2).values()) == {2, 8}
    assert shave(h, 2, 2).shaved == h


def test_bad_arguments():
    h = Hypergraph.complete(3, 5)
    with pytest.raises(ArityError):
        shave(h, 3, 1)
    with pytest.raises(HypergraphError):
        shave(h, 2, 0)


class TestClassify:
    def test_empty(self):
        low, rest = classify_vertices(Hypergraph.empty(3, 6), 1)
        assert low == frozenset(range(6)) and not rest

    def test_complete(self):
        low, rest = classify_vertices(Hypergraph.complete(3, 6), comb(5, 2))
        assert not low and rest == frozenset(range(6))

    def test_shaved_single_edge(self):
        res = shave(Hypergraph(3, 5, [(0, 1, 2)]), 2, 2, vertex_bound=1)
        assert res.low_vertices == frozenset(range(5))


@given(sparse_graphs(), st.integers(1, 4), st.sampled_from([1, 2]))
@settings(max_examples=200, deadline=None)
def test_post_conditions(h, theta, ell):
    res = shave(h, ell, theta)
    assert res.shaved.edges <= h.edges
    assert all(d == 0 or d >= theta for d in ell_degrees(res.shaved, ell).values())
    assert len(res.shaved) >= len(h) - comb(h.n, ell) * theta
    assert shave(res.shaved, ell, theta).edges_removed == 0


@given(sparse_graphs(), st.integers(1, 3), st.integers(0, 3), st.integers(0, 2**32))
@settings(max_examples=500, deadline=None)
def test_order_confluence(h, theta, extra, seed):
    rng = np.random.default_rng(seed)
    assert shave(h, 2, theta).shaved == shave(h, 2, theta, rng=rng).shaved
    assert shave(h, 2, theta + extra).shaved.edges <= shave(h, 2, theta).shaved.edges
