import numpy as np
import pytest

from hyperham.absorbing import LibraryConfig, build_absorber_library, build_connector_library, path_constants
from hyperham.hypergraph import CycleWitness, Hypergraph, HypergraphError, is_hamiltonian_cycle
from hyperham.pipeline import (
    AbsorbError,
    ConnectError,
    CoverError,
    PipelineConfig,
    absorb_leftover,
    connect_into_cycle,
    find_hamilton_cycle,
    path_cover,
)
from hyperham.random_models import extremal_h0, make_rng


class TestConfig:
    def test_segment_length(self):
        # 1/zeta^3 = 125 for zeta = 0.2, already = ell mod 1
        assert PipelineConfig(k=3, ell=2).segment_edges == 123
        assert PipelineConfig(k=3, ell=1, cover_zeta=0.5).segment_edges == 4

    @pytest.mark.parametrize("kw", [{"ell": 3}, {"alpha": 1.5}, {"rounds": 0}, {"segment_length": 8, "ell": 1}])
    def test_rejects(self, kw):
        with pytest.raises(HypergraphError):
            PipelineConfig(k=3, **kw)


class TestPathCover:
    def test_complete(self):
        n = 30
        g = Hypergraph.complete(3, n)
        ends = {tuple(sorted(e)) for e in g.shadow(2)}
        res = path_cover(g, range(n), set(), ends, PipelineConfig(k=3, ell=2), make_rng(0))
        assert res.leftover <= res.reservoir
        covered = [v for p in res.paths for v in p]
        assert len(covered) == len(set(covered))
        assert set(covered) | res.leftover == set(range(n))
        for p in res.paths:
            assert tuple(sorted(p[:2])) in ends and tuple(sorted(p[-2:])) in ends

    def test_empty_names_stuck_vertex(self):
        g = Hypergraph.empty(3, 12)
        ends = {(0, 1), (2, 3)}
        with pytest.raises(CoverError) as err:
            path_cover(g, range(12), set(), ends, PipelineConfig(k=3, ell=2), make_rng(0))
        assert "vertex" in err.value.diagnostics

    def test_phase_two_geometry(self):
        n = 15
        g = Hypergraph.complete(3, n)
        ends = set(g.shadow(2))
        cfg = PipelineConfig(k=3, ell=2, segment_tries=0)
        res = path_cover(g, range(n), set(), ends, cfg, make_rng(1))
        t6 = path_constants(3, 2).t6
        assert res.phase1 == 0 and res.phase2 == len(res.paths) > 0
        for p in res.paths:
            assert len(p) == t6 * 1 + 2
            v = p[2]
            assert all(v in p[j : j + 3] for j in range(len(p) - 2))
            assert v not in p[:2] and v not in p[-2:]


def _library_for_pairs(g, pairs, excluded, seed):
    cfg = LibraryConfig(budget=len(pairs), candidates_per_demand=40)
    return build_connector_library(g, None, [], excluded, cfg, make_rng(seed), ell=2, demands=pairs)


class TestConnect:
    def test_one_path(self):
        g = Hypergraph.complete(3, 10)
        path = (0, 1, 2, 3, 4, 5)
        lib = _library_for_pairs(g, [((4, 5), (0, 1))], set(path), 0)
        order = connect_into_cycle([path], lib, make_rng(0), 2)
        assert is_hamiltonian_cycle(g, CycleWitness(order, 3, 2))

    def test_nothing_to_connect(self):
        with pytest.raises(ConnectError):
            connect_into_cycle([], None, make_rng(0), 2)

    def test_three_paths(self):
        g = Hypergraph.complete(3, 40)
        paths = [(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)]
        pairs = [(paths[i][-2:], paths[(i + 1) % 3][:2]) for i in range(3)]
        lib = _library_for_pairs(g, pairs, set(range(12)), 3)
        stats = {}
        order = connect_into_cycle(paths, lib, make_rng(0), 2, stats=stats)
        assert stats == {"library": 3} and len(lib.used) == 3
        assert len(order) == len(set(order)) == 12 + 3 * 4
        assert set(range(12)) <= set(order)
        assert set(CycleWitness(order, 3, 2).window_edges()) <= g.edges

    def test_shortfall_names_pair(self):
        with pytest.raises(ConnectError) as err:
            connect_into_cycle([(0, 1, 2, 3), (4, 5, 6, 7)], None, make_rng(0), 2)
        assert err.value.diagnostics["ends"] == [[2, 3], [4, 5]]

    def test_search_fallback(self):
        g = Hypergraph.complete(3, 12)
        pool = set(range(8, 12))
        order = connect_into_cycle([(0, 1, 2, 3), (4, 5, 6, 7)], None, make_rng(0), 2, g, pool)
        assert is_hamiltonian_cycle(g, CycleWitness(order, 3, 2))


class TestAbsorbLeftover:
    @pytest.mark.parametrize("ell,n", [(2, 12), (1, 16)])
    def test_one_block(self, ell, n):
        g = Hypergraph.complete(3, n)
        step = 3 - ell
        target = tuple(range(n - step, n))
        cfg = LibraryConfig(budget=1, candidates_per_demand=3)
        lib = build_absorber_library(g, None, range(n), (), cfg, make_rng(0), ell, targets=[target])
        q = lib.members[0].q
        rest = [v for v in range(n) if v not in q and v not in target]
        order = q + tuple(rest)
        final = absorb_leftover(order, set(target), lib, 3, ell)
        assert len(final) == len(order) + step
        assert is_hamiltonian_cycle(g, CycleWitness(final, 3, ell))

    def test_empty_leftover(self):
        lib = build_absorber_library(Hypergraph.complete(3, 12), None, [], (), LibraryConfig(), make_rng(0), 2)
        assert absorb_leftover((0, 1, 2), set(), lib, 3, 2) == (0, 1, 2)

    def test_consumed(self):
        g = Hypergraph.complete(3, 12)
        cfg = LibraryConfig(budget=1, candidates_per_demand=3)
        lib = build_absorber_library(g, None, range(12), (), cfg, make_rng(0), 2, targets=[(11,)])
        lib.used.add(0)
        order = tuple(v for v in range(12) if v != 11)
        with pytest.raises(AbsorbError) as err:
            absorb_leftover(order, {11}, lib, 3, 2)
        assert err.value.diagnostics["vertex"] == 11


class TestPipeline:
    def test_complete_no_random_edges(self):
        res = find_hamilton_cycle(Hypergraph.complete(3, 12), 0.0, PipelineConfig(k=3, ell=2, seed=3))
        assert res.success
        assert is_hamiltonian_cycle(Hypergraph.complete(3, 12), res.witness)

    def test_empty_fails_early(self):
        res = find_hamilton_cycle(Hypergraph.empty(3, 12), 0.0, PipelineConfig(k=3, ell=2))
        assert res.outcome == "failure" and res.stage in ("shave", "connectors")

    def test_indivisible_n(self):
        with pytest.raises(HypergraphError):
            find_hamilton_cycle(Hypergraph.complete(3, 13), 0.0, PipelineConfig(k=3, ell=1))

    def test_deterministic(self):
        h = extremal_h0(15, 3, 0.2)
        a = find_hamilton_cycle(h, 0.3, PipelineConfig(k=3, ell=2, seed=11)).to_dict()
        b = find_hamilton_cycle(h, 0.3, PipelineConfig(k=3, ell=2, seed=11)).to_dict()
        assert a == b

    @pytest.mark.parametrize("ell", [1, 2])
    def test_successes_validate(self, ell):
        n = 30
        h = extremal_h0(n, 3, 0.3)
        wins = 0
        for seed in range(4):
            res = find_hamilton_cycle(h, 1.0, PipelineConfig(k=3, ell=ell, seed=seed))
            if res.success:
                wins += 1
                union = h.union(*res.rounds)
                assert is_hamiltonian_cycle(union, res.witness)
                assert len(set(res.witness.order)) == n
        assert wins >= 1

    @pytest.mark.parametrize("ell", [1, 2])
    def test_leftover_is_absorbed_blockwise(self, ell):
        for seed in range(3):
            res = find_hamilton_cycle(extremal_h0(30, 3, 0.3), 1.0, PipelineConfig(k=3, ell=ell, seed=seed))
            if res.success:
                assert res.trace["leftover"] % (3 - ell) == 0
                assert res.trace["absorbed"] * (3 - ell) == res.trace["leftover"]

    def test_alpha_warning(self, caplog):
        h = extremal_h0(15, 3, 0.2)
        find_hamilton_cycle(h, 1.0, PipelineConfig(k=3, ell=2, alpha=0.9))
        assert any("below alpha" in r.message for r in caplog.records)


def test_rng_independent_of_numpy_global_state():
    np.random.seed(0)
    a = find_hamilton_cycle(Hypergraph.complete(3, 12), 0.0, PipelineConfig(k=3, ell=2, seed=5)).to_dict()
    np.random.seed(1)
    b = find_hamilton_cycle(Hypergraph.complete(3, 12), 0.0, PipelineConfig(k=3, ell=2, seed=5)).to_dict()
    assert a == b
