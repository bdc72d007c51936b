import itertools
import math
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from hyperham.hypergraph import HypergraphError
from hyperham.random_models import (
    RandomSpec,
    derive_seed,
    exposure_rounds,
    extremal_h0,
    gnp,
    split_exposure,
    unrank_combination,
)


def test_p_zero_and_one():
    assert len(gnp(RandomSpec(8, 3, 0.0, 1))) == 0
    assert len(gnp(RandomSpec(8, 3, 1.0, 1))) == comb(8, 3)


def test_edge_count_mean():
    counts = [len(gnp(RandomSpec(20, 3, 0.1, s))) for s in range(100)]
    mean, sd = comb(20, 3) * 0.1, math.sqrt(comb(20, 3) * 0.1 * 0.9)
    assert all(abs(c - mean) <= 4 * sd for c in counts)
    assert abs(np.mean(counts) - mean) < 4 * sd / 10


def test_sparse_branch_mean():
    p = 0.005
    counts = [len(gnp(RandomSpec(30, 3, p, s))) for s in range(200)]
    mean, sd = comb(30, 3) * p, math.sqrt(comb(30, 3) * p * (1 - p))
    assert abs(np.mean(counts) - mean) < 4 * sd / math.sqrt(200)


def test_gnp_is_deterministic():
    spec = RandomSpec(15, 3, 0.2, 42)
    assert gnp(spec) == gnp(spec)
    assert gnp(spec) != gnp(RandomSpec(15, 3, 0.2, 43))


def test_bad_p():
    with pytest.raises(HypergraphError):
        RandomSpec(10, 3, 1.5, 0)


def test_unrank_matches_itertools():
    combos = list(itertools.combinations(range(9), 4))
    assert [unrank_combination(i, 9, 4) for i in range(len(combos))] == combos


class TestExposure:
    def test_examples(self):
        assert split_exposure(0.19, 2).per_round_p == pytest.approx(0.1, rel=1e-12)
        assert split_exposure(0.0, 5).per_round_p == 0.0
        assert split_exposure(0.5, 4).per_round_p == pytest.approx(1 - 0.5**0.25, rel=1e-12)
        assert split_exposure(0.5, 4).per_round_p == pytest.approx(0.159103584746285, rel=1e-9)

    @given(st.floats(0, 1), st.integers(1, 8))
    def test_product_identity(self, p, r):
        q = split_exposure(p, r).per_round_p
        assert (1 - q) ** r == pytest.approx(1 - p, abs=1e-12)

    def test_union_matches_single_draw(self):
        n, k, p = 10, 3, 0.3
        union = []
        for s in range(10_000):
            first, *rest = exposure_rounds(n, k, p, 4, s)
            union.append(len(first.union(*rest)))
        single = [len(gnp(RandomSpec(n, k, p, derive_seed(99, s)))) for s in range(10_000)]
        assert ks_2samp(union, single).statistic < 0.05

    def test_rounds_are_independent_streams(self):
        rounds = exposure_rounds(12, 3, 0.5, 4, 7)
        assert len({r.edges for r in rounds}) == 4


class TestSeeds:
    def test_distinct_over_sweep_keys(self):
        seeds = {derive_seed(0, n, i, t) for n in (15, 30) for i in range(7) for t in range(50)}
        assert len(seeds) == 2 * 7 * 50

    def test_stable(self):
        assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)


class TestExtremal:
    def test_count(self):
        assert len(extremal_h0(10, 3, 0.2)) == 64

    def test_singleton_b(self):
        n = 8
        h = extremal_h0(n, 3, (n - 1) / n + 1e-6)
        assert len(h) == comb(n, 3) - comb(n - 1, 3)

    def test_b_independent(self):
        h = extremal_h0(12, 3, 0.25)
        for e in itertools.combinations(range(3, 12), 3):
            assert e not in h

    def test_degenerate(self):
        with pytest.raises(HypergraphError):
            extremal_h0(5, 3, 0.1)
