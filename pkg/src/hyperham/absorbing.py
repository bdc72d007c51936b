"""Connectors, absorbers and disjoint-family selection.

A connector for ordered l-sets (A, B) is an ordered t3-tuple C such that
A + C + B spans an l-path with 3*t1 edges.  An absorber for a (k-l)-set W is
an l-path Q that, with W threaded through its blocks, becomes an l-path Q'
with the same two l-ends.  Both libraries are built from candidates that
are grown greedily in the dense graph and then tested against the union
with the random edges.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .hypergraph import ArityError, Hypergraph, HypergraphError, PathPattern, spans_labeled_copy

Tup = tuple[int, ...]


@dataclass(frozen=True)
class PathConstants:
    t1: int
    t2: int
    t3: int
    t4: int
    t5: int
    t6: int


def path_constants(k: int, ell: int) -> PathConstants:
    if not 1 <= ell < k:
        raise HypergraphError(f"need 1 <= ell < k, got ell={ell}, k={k}")
    step = k - ell
    t1 = -(-ell // step)
    t4 = -(-(3 * k - ell - 2) // step)
    return PathConstants(
        t1=t1,
        t2=t1 * step - ell,
        t3=3 * t1 * step - ell,
        t4=t4,
        t5=t4 * step,
        t6=(k - 1) // step + 1,
    )


class ExtensionError(HypergraphError):
    """Greedy extension hit an l-end with no admissible neighbour."""

    def __init__(self, end: Tup, step: int):
        super().__init__(f"no admissible extension of l-end {end} at step {step}")
        self.end = end
        self.step = step


def _pick(rng: np.random.Generator, seq: Sequence):
    return seq[int(rng.integers(len(seq)))]


def extend_once(
    h: Hypergraph,
    path: Sequence[int],
    ell: int,
    blocked: set[int],
    rng: np.random.Generator,
    allowed: set[int] | None = None,
) -> Tup:
    """Ordered (k-l)-tuple T (random choice and order) with last-l(path) + T an edge."""
    end = tuple(path[-ell:])
    options = [
        t
        for t in h.neighbors(end)
        if not any(v in blocked for v in t) and (allowed is None or allowed.issuperset(t))
    ]
    if not options:
        raise ExtensionError(end, 0)
    chosen = _pick(rng, options)
    return tuple(chosen[i] for i in rng.permutation(len(chosen)))


def greedy_extend(
    h: Hypergraph,
    start: Sequence[int],
    steps: int,
    forbidden: Iterable[int] = (),
    rng: np.random.Generator | None = None,
    allowed: set[int] | None = None,
    ell: int | None = None,
) -> Tup:
    """Grow an l-path of ``steps`` edges from the ordered l-set ``start``.

    ``ell`` defaults to ``len(start)``.  Raises :class:`ExtensionError` naming
    the stuck l-end.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    ell = len(start) if ell is None else ell
    path = list(start)
    if len(path) < ell or not 1 <= ell < h.k:
        raise ArityError(f"start must hold at least ell={ell} vertices, 1 <= ell < k")
    blocked = set(forbidden) | set(path)
    for i in range(steps):
        try:
            new = extend_once(h, path, ell, blocked, rng, allowed)
        except ExtensionError as exc:
            raise ExtensionError(exc.end, i) from None
        path.extend(new)
        blocked.update(new)
    return tuple(path)


# --- connectors ----------------------------------------------------------------


def connects(g: Hypergraph, a: Sequence[int], b: Sequence[int], c: Sequence[int], ell: int) -> bool:
    """True iff A + C + B spans an l-path with 3*t1 edges in ``g``."""
    const = path_constants(g.k, ell)
    if len(a) != ell or len(b) != ell:
        raise ArityError(f"connector ends must have {ell} vertices")
    if len(c) != const.t3:
        raise ArityError(f"connector body must have t3={const.t3} vertices, got {len(c)}")
    if len(set(a) | set(b) | set(c)) != 2 * ell + const.t3:
        raise HypergraphError("connector ends and body must be pairwise disjoint")
    return spans_labeled_copy(g, tuple(a) + tuple(c) + tuple(b), PathPattern(g.k, ell, 3 * const.t1))


@dataclass
class LibraryConfig:
    budget: int = 10
    candidates_per_demand: int = 40
    multiplicity: int = 1
    degree_floor: int = 1
    vertex_floor: int = 1
    demands: int = 12


@dataclass
class Selection:
    members: list[Tup]
    counts: dict
    shortfalls: dict


def select_disjoint_family(
    candidates: Iterable[Sequence[int]],
    demands: dict[Hashable, Iterable[Sequence[int]]],
    budget: int,
    rng: np.random.Generator,
    multiplicity: int = 1,
) -> Selection:
    """Greedy vertex-disjoint subfamily, served round-robin over the demands.

    Candidates are deduplicated and sorted before being shuffled by ``rng``,
    so the output does not depend on the input order.  After the
    round-robin pass, any candidate still disjoint from the selection is
    added while the budget allows, which makes the result maximal.
    """
    pool = sorted({tuple(c) for c in candidates})
    rank = {c: int(r) for c, r in zip((pool[i] for i in rng.permutation(len(pool))), range(len(pool)))}
    queues = {
        key: sorted({tuple(c) for c in cs if tuple(c) in rank}, key=rank.__getitem__)
        for key, cs in demands.items()
    }
    keys = sorted(queues)
    used: set[int] = set()
    chosen: list[Tup] = []
    counts = {key: 0 for key in keys}
    cursor = {key: 0 for key in keys}

    def fits(c: Tup) -> bool:
        return not used.intersection(c)

    progress = True
    while progress and len(chosen) < budget:
        progress = False
        for key in keys:
            if len(chosen) >= budget:
                break
            q = queues[key]
            while cursor[key] < len(q) and not fits(q[cursor[key]]):
                cursor[key] += 1
            if cursor[key] < len(q):
                c = q[cursor[key]]
                chosen.append(c)
                used.update(c)
                progress = True
    for c in sorted(pool, key=rank.__getitem__):
        if len(chosen) >= budget:
            break
        if fits(c):
            chosen.append(c)
            used.update(c)
    chosen_set = set(chosen)
    for key in keys:
        counts[key] = sum(1 for c in queues[key] if c in chosen_set)
    shortfalls = {key: multiplicity - cnt for key, cnt in counts.items() if cnt < multiplicity}
    return Selection(chosen, counts, shortfalls)


@dataclass
class ConnectorLibrary:
    graph: Hypergraph
    ell: int
    members: list[Tup] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    shortfalls: dict = field(default_factory=dict)
    used: set[int] = field(default_factory=set)
    # distinct accepted candidates per demand, before disjoint selection
    found: dict = field(default_factory=dict)

    @property
    def constants(self) -> PathConstants:
        return path_constants(self.graph.k, self.ell)

    def vertices(self) -> set[int]:
        return {v for c in self.members for v in c}

    def unused_vertices(self) -> set[int]:
        return {v for i, c in enumerate(self.members) if i not in self.used for v in c}

    def usable(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """Indices of unused members that connect (a, b)."""
        ends = set(a) | set(b)
        return [
            i
            for i, c in enumerate(self.members)
            if i not in self.used and not ends.intersection(c) and connects(self.graph, a, b, c, self.ell)
        ]

    def take(self, index: int) -> Tup:
        if index in self.used:
            raise HypergraphError(f"connector {index} already used")
        self.used.add(index)
        return self.members[index]

    def summary(self) -> dict:
        return {
            "members": len(self.members),
            "used": len(self.used),
            "demands": len(self.counts),
            "served": sum(1 for v in self.counts.values() if v > 0),
            "reachable": sum(1 for v in self.found.values() if v > 0),
            "shortfalls": len(self.shortfalls),
        }


def sample_end_pairs(ends: Iterable[Sequence[int]], count: int, rng: np.random.Generator) -> list[tuple[Tup, Tup]]:
    """Random ordered pairs of disjoint ordered l-sets drawn from ``ends``."""
    pool = sorted({tuple(sorted(e)) for e in ends})
    out: list[tuple[Tup, Tup]] = []
    if len(pool) < 2:
        return out
    tries = 0
    while len(out) < count and tries < 20 * count:
        tries += 1
        a, b = _pick(rng, pool), _pick(rng, pool)
        if set(a) & set(b):
            continue
        a = tuple(a[i] for i in rng.permutation(len(a)))
        b = tuple(b[i] for i in rng.permutation(len(b)))
        out.append((a, b))
    return out


def connector_candidate(
    hstar: Hypergraph,
    a: Tup,
    b: Tup,
    ell: int,
    excluded: set[int],
    rng: np.random.Generator,
    allowed: set[int] | None = None,
    union: Hypergraph | None = None,
) -> Tup:
    """Extend A forward and B backward t1 steps in ``hstar``, pad the middle with t2 vertices.

    With ``union`` given, the last backward step is drawn only among the
    options that make A + C + B a path of ``union``.
    """
    const = path_constants(hstar.k, ell)
    blocked = set(excluded) | set(a) | set(b)
    head = greedy_extend(hstar, a, const.t1, blocked, rng, allowed)[ell:]
    blocked.update(head)
    steps = const.t1 if union is None else const.t1 - 1
    back = greedy_extend(hstar, tuple(reversed(b)), steps, blocked, rng, allowed)
    blocked.update(back)
    free = sorted(v for v in (allowed if allowed is not None else range(hstar.n)) if v not in blocked)
    if len(free) < const.t2:
        raise ExtensionError(tuple(a), const.t1)
    pads = tuple(free[i] for i in rng.choice(len(free), size=const.t2, replace=False)) if const.t2 else ()
    if union is None:
        return head + pads + tuple(reversed(back[ell:]))
    end = back[-ell:]
    options = [
        t
        for t in hstar.neighbors(end)
        if blocked.isdisjoint(t) and not set(pads).intersection(t) and (allowed is None or allowed.issuperset(t))
    ]
    for i in rng.permutation(len(options)):
        t = options[int(i)]
        last = tuple(t[j] for j in rng.permutation(len(t)))
        c = head + pads + tuple(reversed(back[ell:] + last))
        if connects(union, a, b, c, ell):
            return c
    raise ExtensionError(tuple(end), const.t1)


def build_connector_library(
    hstar: Hypergraph,
    g: Hypergraph | None,
    ends: Iterable[Sequence[int]],
    excluded: Iterable[int],
    cfg: LibraryConfig,
    rng: np.random.Generator,
    ell: int | None = None,
    demands: list[tuple[Tup, Tup]] | None = None,
    allowed: set[int] | None = None,
) -> ConnectorLibrary:
    """Disjoint connectors avoiding ``excluded``, tested in ``hstar`` plus ``g``.

    ``demands`` are the ordered end pairs to serve; by default ``cfg.demands``
    pairs are sampled from ``ends``.  Under-served pairs are reported in
    ``shortfalls`` rather than raised.
    """
    ends = [tuple(e) for e in ends]
    if ell is None:
        if not ends and not demands:
            raise HypergraphError("cannot infer ell from an empty end family")
        ell = len(ends[0]) if ends else len(demands[0][0])
    union = hstar if g is None else hstar.union(g)
    lib = ConnectorLibrary(union, ell)
    if demands is None:
        demands = sample_end_pairs(ends, cfg.demands, rng)
    excluded = set(excluded)
    cands: dict[tuple[Tup, Tup], set[Tup]] = {}
    for a, b in demands:
        key = (tuple(a), tuple(b))
        cands.setdefault(key, set())
        if hstar.degree(a) < cfg.degree_floor or hstar.degree(b) < cfg.degree_floor:
            continue
        for _ in range(cfg.candidates_per_demand):
            try:
                c = connector_candidate(hstar, key[0], key[1], ell, excluded, rng, allowed, union)
            except ExtensionError:
                continue
            if connects(union, key[0], key[1], c, ell):
                cands[key].add(c)
    every = set().union(*cands.values()) if cands else set()
    sel = select_disjoint_family(every, cands, cfg.budget, rng, cfg.multiplicity)
    lib.members = sel.members
    lib.found = {key: len(cs) for key, cs in cands.items()}
    lib.counts = sel.counts
    lib.shortfalls = sel.shortfalls
    return lib


# --- absorbers -----------------------------------------------------------------


class CorruptWitnessError(HypergraphError):
    pass


@dataclass(frozen=True)
class AbsorberWitness:
    """Blocks X_i, Z_i, Y_i (i = 1..k-l), T and the target W they absorb.

    Q interleaves X_i Z_{i+1} Y_i (with Z_1 after the last X); Q' threads
    w_i between X_i and Z_i.
    """

    k: int
    ell: int
    target: Tup
    xs: tuple[Tup, ...]
    zs: tuple[Tup, ...]
    ys: tuple[Tup, ...]
    t: Tup

    @property
    def m(self) -> int:
        return self.k - self.ell

    @property
    def q(self) -> Tup:
        out: list[int] = []
        for i in range(self.m):
            out += self.xs[i] + self.zs[(i + 1) % self.m] + self.ys[i]
        return tuple(out) + self.t

    def q_prime(self, target: Sequence[int] | None = None) -> Tup:
        w = self.target if target is None else tuple(target)
        out: list[int] = []
        for i in range(self.m):
            out += self.xs[i] + (w[i],) + self.zs[i] + self.ys[i]
        return tuple(out) + self.t

    def ends(self) -> tuple[Tup, Tup]:
        q = self.q
        return q[: self.ell], q[-self.ell :]

    def retarget(self, target: Sequence[int]) -> AbsorberWitness:
        return AbsorberWitness(self.k, self.ell, tuple(target), self.xs, self.zs, self.ys, self.t)

    def check_shape(self) -> None:
        const = path_constants(self.k, self.ell)
        m = self.m
        if len(self.target) != m or len(self.xs) != m or len(self.zs) != m or len(self.ys) != m:
            raise CorruptWitnessError("witness needs k-l blocks of each kind")
        for i in range(m):
            if len(self.xs[i]) != self.k - 1:
                raise CorruptWitnessError(f"|X_{i + 1}| != k-1")
            if len(self.zs[i]) != i:
                raise CorruptWitnessError(f"|Z_{i + 1}| != {i}")
            if len(self.ys[i]) != const.t5 - self.k - i:
                raise CorruptWitnessError(f"|Y_{i + 1}| != t5-k-{i}")
        if len(self.t) != self.ell:
            raise CorruptWitnessError("|T| != ell")
        q = self.q
        if len(set(q)) != len(q):
            raise CorruptWitnessError("blocks are not pairwise disjoint")
        if set(q) & set(self.target) or len(set(self.target)) != m:
            raise CorruptWitnessError("target must be k-l distinct vertices outside Q")


def absorb_insert(w: AbsorberWitness, graph: Hypergraph | None = None) -> Tup:
    """Return Q' for the witness; with ``graph`` also require both span checks."""
    w.check_shape()
    q, qp = w.q, w.q_prime()
    if q[: w.ell] != qp[: w.ell] or q[-w.ell :] != qp[-w.ell :]:
        raise CorruptWitnessError("Q and Q' must share their l-ends")
    if graph is not None:
        t5 = path_constants(w.k, w.ell).t5
        if not spans_labeled_copy(graph, q, PathPattern(w.k, w.ell, t5 - 1)):
            raise CorruptWitnessError("Q does not span the absorber path")
        if not spans_labeled_copy(graph, qp, PathPattern(w.k, w.ell, t5)):
            raise CorruptWitnessError("Q' does not span the extended path")
    return qp


def absorbs(w: AbsorberWitness, target: Sequence[int], graph: Hypergraph) -> Tup | None:
    """An ordering of ``target`` that ``w``'s blocks absorb in ``graph``, else None."""
    if set(target) & set(w.q):
        return None
    t5 = path_constants(w.k, w.ell).t5
    pattern = PathPattern(w.k, w.ell, t5)
    for order in itertools.permutations(sorted(target)):
        if spans_labeled_copy(graph, w.q_prime(order), pattern):
            return order
    return None


def absorber_candidate(
    hprime: Hypergraph,
    target: Tup,
    ell: int,
    excluded: set[int],
    rng: np.random.Generator,
) -> AbsorberWitness:
    """Grow one path of t4 edges through each w_i (as its k-th vertex) and cut it into blocks."""
    k = hprime.k
    const = path_constants(k, ell)
    m = k - ell
    used = set(excluded) | set(target)
    xs, zs, ys = [], [], []
    tail: Tup = ()
    for i, w in enumerate(target):
        options = [e for e in hprime.incident(w) if not used.intersection(v for v in e if v != w)]
        if not options:
            raise ExtensionError((w,), 0)
        rest = [v for v in _pick(rng, options) if v != w]
        x = tuple(rest[j] for j in rng.permutation(len(rest)))
        path = greedy_extend(hprime, x + (w,), const.t4 - 1, used, rng, ell=ell)
        # path = v_1..v_{t5+ell}, with v_k = w
        xs.append(path[: k - 1])
        zs.append(path[k : k + i])
        ys.append(path[k + i : const.t5])
        used.update(path[: const.t5])
        if i == m - 1:
            tail = path[const.t5 : const.t5 + ell]
    return AbsorberWitness(k, ell, tuple(target), tuple(xs), tuple(zs), tuple(ys), tail)


@dataclass
class AbsorberLibrary:
    graph: Hypergraph
    ell: int
    members: list[AbsorberWitness] = field(default_factory=list)
    coverage: dict = field(default_factory=dict)
    shortfalls: dict = field(default_factory=dict)
    used: set[int] = field(default_factory=set)

    def vertices(self) -> set[int]:
        return {v for w in self.members for v in w.q}

    def absorbers_for(self, target: Sequence[int]) -> list[tuple[int, Tup]]:
        """(member index, absorbed ordering) for each unused member absorbing ``target``."""
        out = []
        for i, w in enumerate(self.members):
            if i in self.used:
                continue
            order = absorbs(w, target, self.graph)
            if order is not None:
                out.append((i, order))
        return out

    def summary(self) -> dict:
        return {
            "members": len(self.members),
            "used": len(self.used),
            "targets": len(self.coverage),
            "covered_targets": sum(1 for v in self.coverage.values() if v),
            "shortfalls": len(self.shortfalls),
        }


def sample_targets(vstar: Iterable[int], size: int, count: int, rng: np.random.Generator) -> list[Tup]:
    pool = sorted(vstar)
    if len(pool) < size:
        return []
    out = []
    seen = set()
    total = math.comb(len(pool), size)
    while len(out) < min(count, total):
        t = tuple(pool[i] for i in rng.choice(len(pool), size=size, replace=False))
        if frozenset(t) in seen:
            continue
        seen.add(frozenset(t))
        out.append(t)
    return out


def build_absorber_library(
    hprime: Hypergraph,
    g: Hypergraph | None,
    vstar: Iterable[int],
    excluded: Iterable[int],
    cfg: LibraryConfig,
    rng: np.random.Generator,
    ell: int,
    targets: list[Tup] | None = None,
) -> AbsorberLibrary:
    """Disjoint W-absorbers avoiding ``excluded`` for sampled (k-l)-sets W of ``vstar``."""
    k = hprime.k
    union = hprime if g is None else hprime.union(g)
    const = path_constants(k, ell)
    lib = AbsorberLibrary(union, ell)
    vstar = set(vstar)
    excluded = set(excluded)
    if targets is None:
        targets = sample_targets(vstar - excluded, k - ell, cfg.demands, rng)
    q_pattern = PathPattern(k, ell, const.t5 - 1)
    qp_pattern = PathPattern(k, ell, const.t5)
    by_q: dict[Tup, AbsorberWitness] = {}
    cands: dict[Tup, set[Tup]] = {}
    for target in targets:
        key = tuple(target)
        cands[key] = set()
        if any(hprime.vertex_degree(w) < cfg.vertex_floor for w in key):
            continue
        for _ in range(cfg.candidates_per_demand):
            try:
                wit = absorber_candidate(hprime, key, ell, excluded, rng)
            except ExtensionError:
                # too sparse for long paths in H' alone: grow in the union instead
                try:
                    wit = absorber_candidate(union, key, ell, excluded, rng)
                except ExtensionError:
                    continue
            q = wit.q
            if spans_labeled_copy(union, q, q_pattern) and spans_labeled_copy(union, wit.q_prime(), qp_pattern):
                by_q.setdefault(q, wit)
                cands[key].add(q)
    sel = select_disjoint_family(by_q, cands, cfg.budget, rng, cfg.multiplicity)
    lib.members = [by_q[q] for q in sel.members]
    taken = lib.vertices()
    for key in cands:
        if taken.intersection(key):
            # these vertices now sit inside an absorber and never need absorbing
            continue
        lib.coverage[key] = [i for i, w in enumerate(lib.members) if absorbs(w, key, union) is not None]
    lib.shortfalls = {key: cfg.multiplicity - len(v) for key, v in lib.coverage.items() if len(v) < cfg.multiplicity}
    return lib
