import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_min_degree, naive_spans
from hyperham.hypergraph import (
    ArityError,
    CycleWitness,
    FormatError,
    Hypergraph,
    HypergraphError,
    MalformedWitnessError,
    PathPattern,
    degree,
    first_violation,
    format_hypergraph,
    format_witness,
    is_hamiltonian_cycle,
    min_d_degree,
    parse_hypergraph,
    parse_witness,
    shadow,
    spans_labeled_copy,
)
from hyperham.random_models import extremal_h0


@st.composite
def small_graphs(draw, k=3, max_n=9):
    n = draw(st.integers(k, max_n))
    all_sets = list(itertools.combinations(range(n), k))
    mask = draw(st.lists(st.booleans(), min_size=len(all_sets), max_size=len(all_sets)))
    return Hypergraph(k, n, [e for e, keep in zip(all_sets, mask) if keep])


class TestConstruction:
    def test_edges_are_canonical(self):
        h = Hypergraph(3, 5, [(2, 0, 1), (0, 1, 2), (4, 3, 1)])
        assert h.sorted_edges() == [(0, 1, 2), (1, 3, 4)]

    def test_rejects_bad_edges(self):
        with pytest.raises(HypergraphError):
            Hypergraph(3, 5, [(0, 1, 1)])
        with pytest.raises(HypergraphError):
            Hypergraph(3, 5, [(0, 1, 5)])
        with pytest.raises(HypergraphError):
            Hypergraph(3, 5, [(0, 1)])

    def test_complete_and_empty(self):
        assert len(Hypergraph.complete(3, 6)) == 20
        assert len(Hypergraph.empty(3, 6)) == 0

    def test_k2_is_accepted(self):
        h = Hypergraph.complete(2, 5)
        assert h.min_degree(1) == 4


class TestDegree:
    def test_complete_pair(self):
        assert degree(Hypergraph.complete(3, 5), (0, 1)) == 3

    def test_empty_vertex(self):
        assert degree(Hypergraph.empty(3, 5), (2,)) == 0

    def test_h0_cross_pair(self):
        # |A| = 2: a = 0 in A, b = 5 in B; any third vertex works
        assert degree(extremal_h0(10, 3, 0.2), (0, 5)) == 8

    def test_arity_errors(self):
        h = Hypergraph.complete(3, 5)
        with pytest.raises(ArityError):
            degree(h, ())
        with pytest.raises(ArityError):
            degree(h, (0, 1, 2))

    @given(small_graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariant(self, h, data):
        s = data.draw(st.lists(st.integers(0, h.n - 1), min_size=1, max_size=2, unique=True))
        assert degree(h, s) == degree(h, list(reversed(s)))

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_handshake(self, h):
        assert sum(h.vertex_degree(v) for v in range(h.n)) == h.k * len(h)


class TestMinDegree:
    def test_complete(self):
        h = Hypergraph.complete(3, 6)
        assert min_d_degree(h, 1) == 10
        assert min_d_degree(h, 2) == 4

    def test_h0_brute_force(self):
        # a vertex of B misses exactly the C(7,2) triples inside B
        h = extremal_h0(10, 3, 0.2)
        assert min_d_degree(h, 1) == brute_min_degree(h, 1) == 15

    @pytest.mark.parametrize("n,alpha", [(10, 0.2), (12, 0.25), (15, 0.3), (20, 0.1)])
    def test_h0_lower_bound(self, n, alpha):
        h = extremal_h0(n, 3, alpha)
        a = int(alpha * n + 1e-9)
        assert min_d_degree(h, 1) >= a * comb(n - a - 1, 1)

    @given(small_graphs(max_n=8))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, h):
        for d in (1, 2):
            assert min_d_degree(h, d) == brute_min_degree(h, d)


class TestShadow:
    def test_single_edge(self):
        assert shadow(Hypergraph(3, 4, [(0, 1, 2)]), 2) == {(0, 1), (0, 2), (1, 2)}

    def test_empty(self):
        assert shadow(Hypergraph.empty(3, 5), 2) == set()

    def test_complete(self):
        assert len(shadow(Hypergraph.complete(3, 5), 2)) == 10

    @given(small_graphs(), st.data())
    @settings(max_examples=50, deadline=None)
    def test_full_shadow_is_edge_set_and_monotone(self, h, data):
        assert shadow(h, h.k) == set(h.edges)
        extra = data.draw(st.lists(st.sampled_from(list(itertools.combinations(range(h.n), 3))), max_size=3))
        bigger = h.union(Hypergraph(3, h.n, extra))
        assert shadow(h, 2) <= shadow(bigger, 2)


class TestLabeledCopies:
    def test_single_edge(self):
        h = Hypergraph(3, 4, [(0, 1, 2)])
        p1 = PathPattern(3, 1, 1)
        assert spans_labeled_copy(h, (0, 1, 2), p1)
        assert not spans_labeled_copy(h, (0, 1, 3), p1)

    def test_arity_mismatch(self):
        h = Hypergraph.complete(3, 8)
        with pytest.raises(ArityError):
            spans_labeled_copy(h, tuple(range(8)), PathPattern(3, 2, 2))

    def test_pattern_geometry(self):
        p = PathPattern(3, 2, 3, 1)
        assert p.vertex_count == 2 + 2 + 3
        assert [list(r) for r in p.edge_positions()] == [[1, 2, 3], [2, 3, 4], [3, 4, 5]]

    @given(small_graphs(max_n=12), st.data())
    @settings(max_examples=300, deadline=None)
    def test_agrees_with_naive(self, h, data):
        ell = data.draw(st.integers(1, 2))
        x = data.draw(st.integers(0, 1))
        max_a = (h.n - 2 * x - ell) // (3 - ell)
        if max_a < 1:
            return
        a = data.draw(st.integers(1, min(max_a, 4)))
        pat = PathPattern(3, ell, a, x)
        t = tuple(data.draw(st.permutations(range(h.n)))[: pat.vertex_count])
        assert spans_labeled_copy(h, t, pat) == naive_spans(h.edges, t, 3, ell, a, x)


class TestCycleChecker:
    def test_complete_loose(self):
        assert is_hamiltonian_cycle(Hypergraph.complete(3, 6), CycleWitness(range(6), 3, 1))

    def test_deleted_window(self):
        h = Hypergraph.complete(3, 6).without([(0, 1, 2)])
        w = CycleWitness(range(6), 3, 1)
        assert not is_hamiltonian_cycle(h, w)
        assert first_violation(h, w) == ("window", 0)

    def test_tight_five(self):
        assert is_hamiltonian_cycle(Hypergraph.complete(3, 5), CycleWitness(range(5), 3, 2))

    def test_coverage_errors(self):
        h = Hypergraph.complete(3, 6)
        assert first_violation(h, CycleWitness((0, 1, 2, 3, 4, 4), 3, 2)) == ("coverage", 5)
        assert first_violation(h, CycleWitness((0, 1, 2, 3), 3, 2)) == ("coverage", 4)

    def test_malformed(self):
        with pytest.raises(MalformedWitnessError):
            first_violation(Hypergraph.complete(3, 5), CycleWitness(range(5), 3, 1))
        with pytest.raises(MalformedWitnessError):
            first_violation(Hypergraph.complete(3, 4), CycleWitness(range(4), 3, 1))

    @given(st.integers(4, 9), st.sampled_from([1, 2]), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_every_window_is_load_bearing(self, n, ell, rnd):
        if n % (3 - ell) or n // (3 - ell) < 3:
            return
        order = list(range(n))
        rnd.shuffle(order)
        w = CycleWitness(order, 3, ell)
        h = Hypergraph.complete(3, n)
        assert is_hamiltonian_cycle(h, w)
        for e in set(w.window_edges()):
            assert not is_hamiltonian_cycle(h.without([e]), w)


class TestTextFormat:
    def test_round_trip(self):
        h = extremal_h0(8, 3, 0.25)
        assert parse_hypergraph(format_hypergraph(h)) == h

    def test_comments_and_blank_lines(self):
        h = parse_hypergraph("# a graph\n3 4 1\n\n0 1 2\n")
        assert h.sorted_edges() == [(0, 1, 2)]

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "3 4\n",
            "3 4 2\n0 1 2\n",
            "3 4 1\n0 1 x\n",
            "3 4 1\n0 1 7\n",
            "3 4 2\n0 1 2\n0 1 2\n",
            "3 4 1\n2 1 0\n",
            "3 4 1\n0 1\n",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(FormatError):
            parse_hypergraph(text)

    def test_witness_round_trip(self):
        assert parse_witness(format_witness((3, 1, 2, 0))) == (3, 1, 2, 0)
