"""Path cover and the five-stage Hamiltonian l-cycle construction.

Stages: shave the host graph twice, build two connector libraries, build
absorbers and link them into one absorbing path, cover most remaining
vertices with paths in the last random round and close everything into a
cycle, then splice the leftover vertices into absorbers.  Every success is
re-validated against the host graph plus all random rounds.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .absorbing import (
    AbsorberLibrary,
    extend_once,
    ConnectorLibrary,
    ExtensionError,
    LibraryConfig,
    build_absorber_library,
    build_connector_library,
    path_constants,
)
from .hypergraph import CycleWitness, Hypergraph, HypergraphError, first_violation
from .oracle import SearchBudget, fill_path_gap, find_path
from .random_models import exposure_rounds, make_rng
from .shaving import shave

log = logging.getLogger(__name__)

Tup = tuple[int, ...]
STAGES = ("shave", "connectors", "absorbers", "cover", "connect", "absorb")


class StageError(HypergraphError):
    def __init__(self, stage: str, message: str, **diagnostics):
        super().__init__(message)
        self.stage = stage
        self.diagnostics = {"reason": message, **diagnostics}


class CoverError(StageError):
    def __init__(self, message: str, **diagnostics):
        super().__init__("cover", message, **diagnostics)


class ConnectError(StageError):
    def __init__(self, message: str, **diagnostics):
        super().__init__("connect", message, **diagnostics)


class AbsorbError(StageError):
    def __init__(self, message: str, **diagnostics):
        super().__init__("absorb", message, **diagnostics)


@dataclass
class PipelineConfig:
    """Knobs of the construction.

    ``alpha`` and ``shave_eta`` default to the measured density
    min-1-degree / n^(k-1).  Budgets are fractions of n: ``library_beta`` of
    the vertices may go to absorbers, ``connector_share`` to each connector
    library, and the path-cover reservoir takes ``cover_zeta`` of what is left.
    """

    k: int = 3
    ell: int = 2
    alpha: float | None = None
    shave_eta: float | None = None
    cover_zeta: float = 0.2
    library_beta: float = 0.4
    connector_share: float = 0.1
    sample_gamma: float = 0.3
    segment_length: int | None = None
    rounds: int = 4
    seed: int = 0
    max_retries: int = 3
    candidates_per_demand: int = 30
    reservoir_tries: int = 20
    segment_tries: int = 20
    search_nodes: int = 20_000

    def __post_init__(self):
        if not 1 <= self.ell < self.k:
            raise HypergraphError(f"need 1 <= ell < k, got ell={self.ell}, k={self.k}")
        for name in ("alpha", "shave_eta", "cover_zeta", "library_beta", "connector_share", "sample_gamma"):
            val = getattr(self, name)
            if val is not None and not 0.0 < val < 1.0:
                raise HypergraphError(f"{name} must lie in (0, 1), got {val}")
        if self.rounds < 1 or self.max_retries < 1:
            raise HypergraphError("rounds and max_retries must be >= 1")
        if self.segment_length is not None and (self.segment_length - self.ell) % (self.k - self.ell):
            raise HypergraphError("segment_length must be congruent to ell mod k-ell")

    @property
    def segment_edges(self) -> int:
        """s1 = (s - l)/(k - l), s the least integer >= 1/zeta^3 with s = l mod (k - l)."""
        step = self.k - self.ell
        if self.segment_length is not None:
            s = self.segment_length
        else:
            s = math.ceil(1 / self.cover_zeta**3 - 1e-9)
            s += (self.ell - s) % step
        return max(1, (s - self.ell) // step)


@dataclass
class CoverResult:
    paths: list[Tup]
    leftover: frozenset[int]
    reservoir: frozenset[int] = frozenset()
    phase1: int = 0
    phase2: int = 0


@dataclass
class PipelineResult:
    outcome: str
    stage: str | None = None
    diagnostics: dict = field(default_factory=dict)
    witness: CycleWitness | None = None
    trace: dict = field(default_factory=dict)
    rounds: list[Hypergraph] = field(default_factory=list, repr=False)

    @property
    def success(self) -> bool:
        return self.outcome == "success"

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "stage": self.stage,
            "diagnostics": self.diagnostics,
            "trace": self.trace,
            "witness": list(self.witness.order) if self.witness else None,
        }


# --- path cover ----------------------------------------------------------------


def _closures(g: Hypergraph, path: Sequence[int], ell: int, steps: int, pool: set[int], ends: set[Tup]):
    """Yield extensions of ``path`` by ``steps`` blocks from ``pool`` whose last l-set is in ``ends``."""
    if steps == 0:
        if tuple(sorted(path[-ell:])) in ends:
            yield tuple(path)
        return
    for t in g.neighbors(path[-ell:]):
        if not pool.issuperset(t):
            continue
        for perm in _orderings(t):
            yield from _closures(g, list(path) + list(perm), ell, steps - 1, pool - set(t), ends)


def _orderings(t: Tup):
    return list(itertools.permutations(t))


def _phase1_segment(
    g: Hypergraph,
    ell: int,
    start: Tup,
    interior: set[int],
    reservoir: set[int],
    ends: set[Tup],
    max_edges: int,
    t1: int,
    rng: np.random.Generator,
) -> Tup | None:
    """Random walk through ``interior``, then close with t1 blocks from ``reservoir``.

    Closure is tried from the longest walk prefix backwards; paths covering no
    interior vertex are rejected.
    """
    walk = list(start)
    blocked = set(start)
    prefixes = [len(walk)]
    for _ in range(max(0, max_edges - t1)):
        try:
            new = extend_once(g, walk, ell, blocked, rng, interior)
        except ExtensionError:
            break
        walk.extend(new)
        blocked.update(new)
        prefixes.append(len(walk))
    for cut in reversed(prefixes[1:]):
        prefix = walk[:cut]
        pool = reservoir - set(prefix)
        for closed in _closures(g, prefix, ell, t1, pool, ends):
            return closed
    return None


def path_cover(
    g: Hypergraph,
    vprime: Sequence[int] | set[int],
    v0: set[int] | frozenset[int],
    ends: Sequence[Tup] | set[Tup],
    cfg: PipelineConfig,
    rng: np.random.Generator,
) -> CoverResult:
    """Cover ``vprime`` by vertex-disjoint l-paths of ``g`` with both l-ends in ``ends``.

    Phase 1 runs long segments through the interior with ends in a reservoir
    R; phase 2 (l >= 2) threads every still-uncovered interior vertex through
    a short path on reservoir vertices.  Unused reservoir vertices are the
    leftover.
    """
    k, ell = g.k, cfg.ell
    const = path_constants(k, ell)
    vprime = set(vprime)
    v0 = set(v0) & vprime
    if ell == 1 and v0:
        raise HypergraphError("for ell = 1 the low-degree set must be empty")
    ends = {tuple(sorted(e)) for e in ends}
    candidates = sorted(vprime - v0)
    floor = max(2 * ell, ell + const.t1 * (k - ell))
    size = min(len(candidates), max(floor, math.ceil(cfg.cover_zeta * len(vprime))))

    best, best_score = set(candidates[:size]), -1
    for _ in range(cfg.reservoir_tries if size < len(candidates) else 1):
        pick = set(candidates) if size == len(candidates) else {candidates[i] for i in rng.choice(len(candidates), size, replace=False)}
        score = sum(1 for e in ends if pick.issuperset(e))
        if score > best_score:
            best, best_score = pick, score
    reservoir = set(best)
    interior = vprime - reservoir
    paths: list[Tup] = []
    phase1 = 0
    threshold = cfg.cover_zeta**3 * len(vprime)
    misses = 0
    while interior and len(interior) >= threshold and misses < cfg.segment_tries:
        starts = sorted(e for e in ends if reservoir.issuperset(e))
        if len(starts) < 2:
            break
        a = starts[int(rng.integers(len(starts)))]
        a = tuple(a[i] for i in rng.permutation(len(a)))
        seg = _phase1_segment(g, ell, a, interior, reservoir - set(a), ends, cfg.segment_edges, const.t1, rng)
        if seg is None:
            misses += 1
            continue
        misses = 0
        paths.append(seg)
        phase1 += 1
        interior -= set(seg)
        reservoir -= set(seg)

    phase2 = 0
    if interior:
        length = const.t6 * (k - ell) + ell
        budget = SearchBudget(cfg.search_nodes, 5_000)
        for v in sorted(interior):

            def good_ends(order):
                return tuple(sorted(order[:ell])) in ends and tuple(sorted(order[-ell:])) in ends

            if v not in interior:
                continue
            pool = sorted((reservoir | interior) - {v})
            found = find_path(g, ell, length, {k - 1: v}, pool, good_ends, budget)
            if found is None:
                if ell == 1:
                    # no low-degree vertices exist, so stragglers are left to the absorbers
                    continue
                raise CoverError(f"vertex {v} could not be embedded", vertex=v, reservoir=len(reservoir))
            paths.append(found)
            phase2 += 1
            reservoir -= set(found)
            interior -= set(found)
    leftover = frozenset(reservoir | interior)
    return CoverResult(paths, leftover, frozenset(best), phase1, phase2)


# --- connecting and absorbing ------------------------------------------------------


def _gap_lengths(k: int, ell: int, cap: int, longest_first: bool) -> list[int]:
    step = k - ell
    const = path_constants(k, ell)
    lens = [m * step - ell for m in range(const.t1, 3 * const.t1 + 1) if 0 <= m * step - ell <= cap]
    return sorted(set(lens), reverse=longest_first)


def join(
    a_path: Tup,
    b_path: Tup,
    lib: ConnectorLibrary | None,
    ell: int,
    rng: np.random.Generator,
    fallback: Hypergraph | None = None,
    pool: set[int] | None = None,
    longest_first: bool = False,
    budget: SearchBudget | None = None,
    reserve: int = 0,
) -> tuple[Tup, str]:
    """A connector between the last l-end of ``a_path`` and the first of ``b_path``.

    Library members come first.  Otherwise a connector of any admissible
    length (at most t3) is searched among ``pool`` in ``fallback``, leaving at
    least ``reserve`` pool vertices untouched for later joins.
    """
    a, b = a_path[-ell:], b_path[:ell]
    if lib is not None:
        usable = lib.usable(a, b)
        if usable:
            c = lib.take(usable[int(rng.integers(len(usable)))])
            if pool is not None:
                pool.difference_update(c)
            return c, "library"
    if fallback is not None and pool is not None:
        k = fallback.k
        t3 = path_constants(k, ell).t3
        for gap in _gap_lengths(k, ell, min(t3, len(pool) - reserve), longest_first):
            mid = fill_path_gap(fallback, ell, a, b, gap, sorted(pool), budget)
            if mid is not None:
                pool.difference_update(mid)
                if lib is not None:
                    # members cannibalised by the search can no longer be handed out
                    lib.used.update(i for i, c in enumerate(lib.members) if not set(mid).isdisjoint(c))
                return mid, "search"
    raise ConnectError(f"no connector for ends {a} -> {b}", ends=[list(a), list(b)])


def connect_into_cycle(
    paths: list[Tup],
    lib: ConnectorLibrary | None,
    rng: np.random.Generator,
    ell: int,
    fallback: Hypergraph | None = None,
    pool: set[int] | None = None,
    stats: dict | None = None,
) -> Tup:
    """Cyclic order path_1 C_1 path_2 C_2 ... path_m C_m, each C_i joining consecutive paths."""
    if not paths:
        raise ConnectError("nothing to connect")
    order: list[int] = []
    shortest = path_constants(fallback.k, ell).t2 if fallback is not None else 0
    for i, p in enumerate(paths):
        nxt = paths[(i + 1) % len(paths)]
        reserve = (len(paths) - i - 1) * shortest
        c, how = join(p, nxt, lib, ell, rng, fallback, pool, longest_first=True, reserve=reserve)
        if stats is not None:
            stats[how] = stats.get(how, 0) + 1
        order.extend(p)
        order.extend(c)
    return tuple(order)


def absorb_leftover(
    order: Tup,
    leftover: set[int] | frozenset[int],
    lib: AbsorberLibrary,
    k: int,
    ell: int,
    node_limit: int = 20_000,
) -> Tup:
    """Partition ``leftover`` into (k-l)-blocks and splice each into its own unused absorber."""
    step = k - ell
    leftover = set(leftover)
    if not leftover:
        return tuple(order)
    if len(leftover) % step:
        raise AbsorbError(f"{len(leftover)} leftover vertices are not divisible by k-l={step}")
    cache: dict[Tup, list] = {}
    nodes = 0

    def options(block: Tup):
        if block not in cache:
            cache[block] = lib.absorbers_for(block)
        return cache[block]

    def assign(rest: list[int], taken: set[int]):
        nonlocal nodes
        if not rest:
            return []
        x, others = rest[0], rest[1:]
        for partners in itertools.combinations(others, step - 1):
            block = tuple(sorted((x,) + partners))
            for idx, w_order in options(block):
                nodes += 1
                if nodes > node_limit:
                    return None
                if idx in taken:
                    continue
                remaining = [v for v in others if v not in partners]
                sub = assign(remaining, taken | {idx})
                if sub is not None:
                    return [(idx, w_order)] + sub
        return None

    plan = assign(sorted(leftover), set())
    if plan is None:
        ordered = sorted(leftover)
        stuck = next(
            (
                x
                for x in ordered
                if not any(
                    options(tuple(sorted((x,) + rest)))
                    for rest in itertools.combinations([v for v in ordered if v != x], step - 1)
                )
            ),
            None,
        )
        if stuck is None:
            raise AbsorbError("leftover cannot be split among distinct unused absorbers", leftover=ordered)
        raise AbsorbError(
            f"no unused absorber for any leftover block containing vertex {stuck}",
            vertex=stuck,
            leftover=len(ordered),
        )
    seq = list(order)
    for idx, w_order in plan:
        member = lib.members[idx]
        q = member.q
        start = seq.index(q[0])
        if start % step or tuple(seq[start : start + len(q)]) != q:
            raise AbsorbError("absorber is not an aligned segment of the cycle", member=idx)
        seq[start : start + len(q)] = member.q_prime(w_order)
        lib.used.add(idx)
    return tuple(seq)


# --- the pipeline ----------------------------------------------------------------


def _vertex_set(paths) -> set[int]:
    return {v for p in paths for v in p}


def find_hamilton_cycle(
    h: Hypergraph,
    p: float,
    cfg: PipelineConfig,
    rounds: list[Hypergraph] | None = None,
) -> PipelineResult:
    """Run the construction on ``h`` plus random rounds of total edge probability ``p``."""
    n, k, ell = h.n, h.k, cfg.ell
    if cfg.k != k:
        raise HypergraphError(f"config is for k={cfg.k}, graph has k={k}")
    step = k - ell
    if n % step:
        raise HypergraphError(f"n={n} is not divisible by k-ell={step}")
    if n // step < 3:
        raise HypergraphError(f"n={n} is too small for an l-cycle")
    if rounds is None:
        rounds = exposure_rounds(n, k, p, cfg.rounds, cfg.seed)
    g = [rounds[i % len(rounds)] for i in range(4)]
    union_all = h.union(*rounds)
    trace: dict = {"n": n, "k": k, "ell": ell, "p": p, "random_edges": [len(x) for x in rounds]}

    delta1 = h.min_degree(1) if k >= 2 else 0
    measured = delta1 / n ** (k - 1)
    alpha = cfg.alpha if cfg.alpha is not None else measured
    trace["min_degree"] = delta1
    if cfg.alpha is not None and delta1 < cfg.alpha * n ** (k - 1):
        log.warning("min 1-degree %d is below alpha * n^(k-1) = %.1f", delta1, cfg.alpha * n ** (k - 1))
        trace["degree_warning"] = True

    # Step 1
    all_v = frozenset(range(n))
    if ell == 1:
        hprime = hstar = h
        v0: frozenset[int] = frozenset()
        vstar = all_v
        ends = [(v,) for v in range(n)]
    else:
        eta = cfg.shave_eta if cfg.shave_eta is not None else min(alpha, 1 / k)
        theta = max(1, math.ceil(eta**2 * n ** (k - ell) - 1e-9))
        bound = math.ceil(2 * alpha * n ** (k - 1) / 3 - 1e-9)
        first = shave(h, ell, theta, bound)
        hprime, v0 = first.shaved, first.low_vertices
        vstar = all_v - v0
        theta2 = max(1, math.ceil(eta**2 * len(vstar) ** (k - ell) - 1e-9))
        second = shave(hprime.induced(vstar), ell, theta2)
        hstar = second.shaved
        ends = sorted(hstar.shadow(ell))
        trace["shave"] = {"first": first.summary(), "second": second.summary()}
    trace["low_vertices"] = len(v0)
    trace["ends"] = len(ends)
    if not ends:
        return PipelineResult("failure", "shave", {"reason": "no usable l-sets after shaving"}, None, trace, rounds)

    result = None
    for attempt in range(cfg.max_retries):
        rng = make_rng(cfg.seed, 1, attempt)
        sub = dict(trace)
        try:
            order = _attempt(h, g, hprime, hstar, v0, vstar, ends, cfg, rng, sub)
        except StageError as exc:
            result = PipelineResult("failure", exc.stage, exc.diagnostics, None, sub, rounds)
            continue
        witness = CycleWitness(order, k, ell)
        bad = first_violation(union_all, witness)
        if bad is not None:
            result = PipelineResult("failure", "validate", {"reason": "witness failed re-check", "defect": list(bad)}, None, sub, rounds)
            continue
        sub["attempts"] = attempt + 1
        return PipelineResult("success", None, {}, witness, sub, rounds)
    result.trace["attempts"] = cfg.max_retries
    return result


def _end_pair(ends, reserved: set[int]) -> list[Tup] | None:
    pair: list[Tup] = []
    for e in ends:
        if reserved.isdisjoint(e) and all(set(e).isdisjoint(f) for f in pair):
            pair.append(tuple(e))
            if len(pair) == 2:
                return pair
    return None


def _attempt(h, g, hprime, hstar, v0, vstar, ends, cfg: PipelineConfig, rng, trace) -> Tup:
    n, k, ell = h.n, h.k, cfg.ell
    step = k - ell
    const = path_constants(k, ell)
    demands = max(4, math.ceil(cfg.sample_gamma * n))
    budget = SearchBudget(cfg.search_nodes, 5_000)

    # Step 2
    c_budget = int(cfg.connector_share * n // const.t3)
    lib_cfg = LibraryConfig(budget=c_budget, candidates_per_demand=cfg.candidates_per_demand, demands=demands)
    # C1 keeps at least one member so the final joins always have spare vertices
    c1_cfg = LibraryConfig(budget=max(1, c_budget), candidates_per_demand=cfg.candidates_per_demand, demands=demands)
    try:
        c1 = build_connector_library(hstar, g[0].induced(vstar), ends, (), c1_cfg, rng, ell=ell, allowed=set(vstar))
        ends_prime = sorted(hprime.shadow(ell)) if ell > 1 else ends
        c2 = build_connector_library(hprime, g[1], ends_prime, c1.vertices(), lib_cfg, rng, ell=ell)
    except HypergraphError as exc:
        raise StageError("connectors", str(exc)) from exc
    trace["c1"] = c1.summary()
    trace["c2"] = c2.summary()
    reserved = c1.vertices() | c2.vertices()

    # Step 3
    q_len = (const.t5 - 1) * step + ell
    a_budget = max(1, int(cfg.library_beta * n // q_len))
    a_cfg = LibraryConfig(
        budget=a_budget,
        candidates_per_demand=max(1, cfg.candidates_per_demand // 3),
        demands=max(demands, a_budget),
    )
    absorbers = build_absorber_library(hprime, g[2], vstar, reserved, a_cfg, rng, ell)
    trace["absorbers"] = absorbers.summary()
    if not absorbers.members:
        raise StageError("absorbers", "no absorber survived the random-edge test")
    reserved |= absorbers.vertices()
    e_pair = _end_pair(ends, reserved)
    if e_pair is None:
        # fall back to dismantling C1 members for the two end sets
        e_pair = _end_pair(ends, reserved - c1.unused_vertices())
        if e_pair is not None:
            hit = set(e_pair[0]) | set(e_pair[1])
            c1.used.update(i for i, c in enumerate(c1.members) if not hit.isdisjoint(c))
    if e_pair is None:
        raise StageError("absorbers", "no two free disjoint end sets for the absorbing path")
    pieces = [e_pair[0]] + [w.q for w in absorbers.members] + [e_pair[1]]
    placed = _vertex_set(pieces)
    pool = set(range(n)) - placed - reserved
    fallback2 = hprime.union(g[1])
    p_abs: list[int] = list(pieces[0])
    joins = {}
    for nxt in pieces[1:]:
        try:
            c, how = join(tuple(p_abs), nxt, c2, ell, rng, fallback2, pool, budget=budget)
        except ConnectError as exc:
            raise StageError("absorbers", "could not link the absorbing path", **exc.diagnostics) from exc
        joins[how] = joins.get(how, 0) + 1
        p_abs.extend(c)
        p_abs.extend(nxt)
    p_abs_t = tuple(p_abs)
    trace["absorbing_path"] = {"length": len(p_abs_t), "joins": joins}

    # Step 4; unused C2 vertices go back into the cover set
    c1_vertices = c1.vertices()
    vprime = set(range(n)) - set(p_abs_t) - c1_vertices
    ends_cover = [e for e in ends if vprime.issuperset(e)]
    if ell == 1:
        ends_cover = [(v,) for v in sorted(vprime)]
    cover = path_cover(g[3], vprime, set(v0) & vprime, ends_cover, cfg, rng)
    trace["cover"] = {
        "paths": len(cover.paths),
        "phase1": cover.phase1,
        "phase2": cover.phase2,
        "reservoir": len(cover.reservoir),
        "leftover": len(cover.leftover),
    }
    stats: dict = {}
    # vertices of C1 members are fair game for the fallback search until a member is used
    c1_pool = set(vstar) - set(p_abs_t) - _vertex_set(cover.paths)
    fallback1 = hstar.union(g[0].induced(vstar))
    order = connect_into_cycle([p_abs_t] + cover.paths, c1, rng, ell, fallback1, c1_pool, stats)
    trace["connect"] = stats

    # Step 5
    leftover = set(range(n)) - set(order)
    if len(leftover) % step:
        raise AssertionError("leftover size must be divisible by k-l")
    if not leftover <= set(vstar):
        raise AbsorbError("leftover contains low-degree vertices", vertices=sorted(leftover - set(vstar)))
    trace["leftover"] = len(leftover)
    final = absorb_leftover(order, leftover, absorbers, k, ell, cfg.search_nodes)
    trace["absorbed"] = len(leftover) // step
    return final
