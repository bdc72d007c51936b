"""Exact backtracking search for Hamiltonian l-cycles, l-paths and labeled copies."""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import perm

from .hypergraph import Hypergraph, HypergraphError, MalformedWitnessError, PathPattern

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 5_000_000
    time_limit_ms: int = 60_000

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit_ms <= 0:
            raise HypergraphError("search budget must be positive")


@dataclass(frozen=True)
class OracleResult:
    status: str
    witness: tuple[int, ...] | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status == YES


class _Exhausted(Exception):
    pass


class _Search:
    """Fill positions left to right; a window edge is checked as soon as its last slot is filled."""

    def __init__(
        self,
        h: Hypergraph,
        length: int,
        windows: list[tuple[int, ...]],
        budget: SearchBudget,
        allowed=None,
    ):
        self.h = h
        self.pool = sorted(allowed) if allowed is not None else list(range(h.n))
        self.length = length
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit_ms / 1000
        # closing[i]: windows whose highest position is i
        self.closing: list[list[tuple[int, ...]]] = [[] for _ in range(length)]
        for w in windows:
            self.closing[max(w)].append(w)
        self.order: list[int | None] = [None] * length
        self.used = [False] * h.n

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise _Exhausted
        if not self.nodes & 0xFFF and time.monotonic() > self.deadline:
            raise _Exhausted

    def _candidates(self, i: int) -> list[int]:
        ends = self.closing[i]
        if not ends:
            return [v for v in self.pool if not self.used[v]]
        cand = None
        for w in ends:
            rest = [self.order[j] for j in w if j != i]
            if any(v is None for v in rest):
                continue
            allowed = {t[0] for t in self.h.neighbors(rest)}
            cand = allowed if cand is None else cand & allowed
        if cand is None:
            return [v for v in self.pool if not self.used[v]]
        return [v for v in self.pool if v in cand and not self.used[v]]

    def _window_ok(self, i: int) -> bool:
        for w in self.closing[i]:
            if not self.h.has_edge(self.order[j] for j in w):
                return False
        return True

    def run(self, i: int, on_complete) -> bool:
        """Depth-first fill from position i; ``on_complete`` returns True to stop."""
        while i < self.length and self.order[i] is not None:
            if not self._window_ok(i):
                return False
            i += 1
        if i == self.length:
            return on_complete()
        for v in self._candidates(i):
            self._tick()
            self.order[i] = v
            self.used[v] = True
            if self._window_ok(i) and self.run(i + 1, on_complete):
                return True
            self.used[v] = False
            self.order[i] = None
        return False


def _cycle_windows(n: int, k: int, ell: int) -> list[tuple[int, ...]]:
    step = k - ell
    return [tuple((j * step + t) % n for t in range(k)) for j in range(n // step)]


def _path_windows(k: int, ell: int, a: int, offset: int = 0) -> list[tuple[int, ...]]:
    step = k - ell
    return [tuple(offset + j * step + t for t in range(k)) for j in range(a)]


def hamilton_exists(h: Hypergraph, ell: int, budget: SearchBudget | None = None) -> OracleResult:
    """Decide whether ``h`` has a Hamiltonian l-cycle.

    Vertex 0 is pinned to one of the first k-l slots: every cyclic order can
    be rotated by a multiple of k-l so that this holds.
    """
    budget = budget or SearchBudget()
    k, n = h.k, h.n
    if not 1 <= ell < k:
        raise HypergraphError(f"need 1 <= ell < k, got ell={ell}")
    step = k - ell
    if n % step or n // step < 3:
        raise MalformedWitnessError(f"n={n} does not admit an l-cycle with k-l={step} and >= 3 edges")
    if any(h.vertex_degree(v) == 0 for v in range(n)):
        return OracleResult(NO)
    windows = _cycle_windows(n, k, ell)
    found: list[tuple[int, ...]] = []
    nodes = 0
    try:
        for q in range(step):
            search = _Search(h, n, windows, budget)
            search.nodes = nodes
            search.order[q] = 0
            search.used[0] = True

            def done(s=search):
                found.append(tuple(s.order))
                return True

            hit = search.run(0, done)
            nodes = search.nodes
            if hit:
                return OracleResult(YES, found[0], nodes)
    except _Exhausted:
        return OracleResult(UNKNOWN, None, budget.node_limit)
    return OracleResult(NO, None, nodes)


def ell_path_exists(h: Hypergraph, ell: int, a: int, budget: SearchBudget | None = None) -> OracleResult:
    budget = budget or SearchBudget()
    if a < 1:
        raise HypergraphError(f"path length must be >= 1, got {a}")
    if not 1 <= ell < h.k:
        raise HypergraphError(f"need 1 <= ell < k, got ell={ell}")
    b = ell + (h.k - ell) * a
    if b > h.n or len(h) < a:
        return OracleResult(NO)
    search = _Search(h, b, _path_windows(h.k, ell, a), budget)
    found: list[tuple[int, ...]] = []

    def done():
        found.append(tuple(search.order))
        return True

    try:
        if search.run(0, done):
            return OracleResult(YES, found[0], search.nodes)
    except _Exhausted:
        return OracleResult(UNKNOWN, None, search.nodes)
    return OracleResult(NO, None, search.nodes)


def count_labeled_copies(h: Hypergraph, pattern: PathPattern) -> int:
    """Number of ordered b-tuples spanning a labeled copy of the pattern (pads free)."""
    if pattern.k != h.k:
        raise HypergraphError("pattern and graph uniformity differ")
    if pattern.vertex_count > h.n:
        return 0
    core = pattern.core_count
    if pattern.a == 0:
        return perm(h.n, pattern.vertex_count)
    search = _Search(h, core, _path_windows(h.k, pattern.ell, pattern.a), SearchBudget(10**12, 10**9))
    count = 0

    def tally():
        nonlocal count
        count += 1
        return False

    search.run(0, tally)
    return count * perm(h.n - core, 2 * pattern.x)


def find_path(
    h: Hypergraph,
    ell: int,
    length: int,
    fixed: dict[int, int],
    allowed,
    accept=None,
    budget: SearchBudget | None = None,
) -> tuple[int, ...] | None:
    """An ordered l-path on ``length`` vertices with ``fixed`` positions preset.

    Free positions draw from ``allowed``; ``accept(order)`` may veto complete
    orders.  Returns None when nothing is found within budget.
    """
    step = h.k - ell
    if length < h.k or (length - ell) % step:
        raise HypergraphError(f"{length} vertices do not form an l-path with k={h.k}, ell={ell}")
    if len(set(fixed.values())) != len(fixed):
        raise HypergraphError("fixed vertices must be distinct")
    pinned = set(fixed.values())
    search = _Search(
        h,
        length,
        _path_windows(h.k, ell, (length - ell) // step),
        budget or SearchBudget(20_000, 5_000),
        allowed=[v for v in allowed if v not in pinned],
    )
    for i, v in fixed.items():
        search.order[i] = v
        search.used[v] = True
    found: list[tuple[int, ...]] = []

    def done():
        order = tuple(search.order)
        if accept is not None and not accept(order):
            return False
        found.append(order)
        return True

    try:
        if search.run(0, done):
            return found[0]
    except _Exhausted:
        pass
    return None


def fill_path_gap(
    h: Hypergraph,
    ell: int,
    prefix,
    suffix,
    gap: int,
    allowed,
    budget: SearchBudget | None = None,
) -> tuple[int, ...] | None:
    """``gap`` vertices from ``allowed`` such that prefix + gap + suffix spans an l-path."""
    prefix, suffix = tuple(prefix), tuple(suffix)
    total = len(prefix) + gap + len(suffix)
    fixed = {i: v for i, v in enumerate(prefix)}
    fixed.update({total - len(suffix) + i: v for i, v in enumerate(suffix)})
    if len(fixed) != len(prefix) + len(suffix):
        raise HypergraphError("prefix and suffix overlap")
    found = find_path(h, ell, total, fixed, allowed, budget=budget)
    return None if found is None else found[len(prefix) : len(prefix) + gap]
