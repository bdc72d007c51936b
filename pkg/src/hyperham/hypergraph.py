"""k-uniform hypergraphs, degree/shadow queries and l-path / l-cycle patterns.

Vertices are the dense integers ``0..n-1``; an edge is stored as the sorted
tuple of its ``k`` vertices.  A :class:`Hypergraph` never changes after
construction, so neighbourhood queries are cached on the instance.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    pass


class ArityError(HypergraphError):
    """A vertex tuple has the wrong length for the requested query."""


class MalformedWitnessError(HypergraphError):
    pass


class FormatError(HypergraphError):
    pass


class Hypergraph:
    """Immutable k-uniform hypergraph on ``range(n)``."""

    __slots__ = ("k", "n", "_edges", "_incidence", "_nbr_cache")

    def __init__(self, k: int, n: int, edges: Iterable[Iterable[int]] = ()):
        if k < 1:
            raise HypergraphError(f"uniformity must be positive, got {k}")
        if n < 0:
            raise HypergraphError(f"vertex count must be nonnegative, got {n}")
        self.k = k
        self.n = n
        canon = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != k or len(set(t)) != k:
                raise HypergraphError(f"edge {t} is not a {k}-set")
            if t[0] < 0 or t[-1] >= n:
                raise HypergraphError(f"edge {t} has a vertex outside [0, {n})")
            canon.add(t)
        self._edges = frozenset(canon)
        inc: list[list[Edge]] = [[] for _ in range(n)]
        for e in sorted(self._edges):
            for v in e:
                inc[v].append(e)
        self._incidence = tuple(tuple(lst) for lst in inc)
        self._nbr_cache: dict[Edge, tuple[Edge, ...]] = {}

    @classmethod
    def complete(cls, k: int, n: int) -> Hypergraph:
        return cls(k, n, itertools.combinations(range(n), k))

    @classmethod
    def empty(cls, k: int, n: int) -> Hypergraph:
        return cls(k, n)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self._edges

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return tuple(sorted(vertices)) in self._edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.k == other.k and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.k, self.n, self._edges))

    def __repr__(self) -> str:
        return f"Hypergraph(k={self.k}, n={self.n}, m={len(self._edges)})"

    def incident(self, v: int) -> tuple[Edge, ...]:
        return self._incidence[v]

    def vertex_degree(self, v: int) -> int:
        return len(self._incidence[v])

    def neighbors(self, s: Iterable[int]) -> tuple[Edge, ...]:
        """Sorted ``(k-|s|)``-sets T with ``s | T`` an edge.

        Scans the shortest incidence list among the vertices of ``s``.
        """
        key = tuple(sorted(s))
        cached = self._nbr_cache.get(key)
        if cached is not None:
            return cached
        if not 1 <= len(key) <= self.k - 1 or len(set(key)) != len(key):
            raise ArityError(f"neighbourhood query needs 1..{self.k - 1} distinct vertices, got {key}")
        for v in key:
            if not 0 <= v < self.n:
                raise HypergraphError(f"vertex {v} outside [0, {self.n})")
        pivot = min(key, key=lambda v: len(self._incidence[v]))
        sset = set(key)
        out = []
        for e in self._incidence[pivot]:
            if sset.issubset(e):
                out.append(tuple(v for v in e if v not in sset))
        result = tuple(out)
        self._nbr_cache[key] = result
        return result

    def degree(self, s: Iterable[int]) -> int:
        s = tuple(s)
        if len(s) == 1:
            if not 0 <= s[0] < self.n:
                raise HypergraphError(f"vertex {s[0]} outside [0, {self.n})")
            if self.k < 2:
                raise ArityError("degree of a 1-set needs k >= 2")
            return len(self._incidence[s[0]])
        return len(self.neighbors(s))

    def min_degree(self, d: int) -> int:
        if not 1 <= d <= self.k - 1:
            raise ArityError(f"d must lie in [1, {self.k - 1}], got {d}")
        if self.n < d:
            return 0
        if d == 1:
            return min(len(lst) for lst in self._incidence)
        counts: Counter[Edge] = Counter()
        for e in self._edges:
            counts.update(itertools.combinations(e, d))
        if len(counts) < comb(self.n, d):
            return 0
        return min(counts.values())

    def shadow(self, ell: int) -> set[Edge]:
        if not 1 <= ell <= self.k:
            raise ArityError(f"shadow order must lie in [1, {self.k}], got {ell}")
        out: set[Edge] = set()
        for e in self._edges:
            out.update(itertools.combinations(e, ell))
        return out

    def induced(self, vertices: Iterable[int]) -> Hypergraph:
        """Spanning subgraph keeping only the edges inside ``vertices``."""
        keep = set(vertices)
        return Hypergraph(self.k, self.n, (e for e in self._edges if keep.issuperset(e)))

    def union(self, *others: Hypergraph) -> Hypergraph:
        edges = set(self._edges)
        for g in others:
            if g.k != self.k or g.n != self.n:
                raise HypergraphError("union needs equal k and n")
            edges |= g._edges
        return Hypergraph(self.k, self.n, edges)

    def without(self, edges: Iterable[Edge]) -> Hypergraph:
        drop = set(edges)
        return Hypergraph(self.k, self.n, (e for e in self._edges if e not in drop))


def degree(h: Hypergraph, s: Sequence[int]) -> int:
    if not 1 <= len(s) <= h.k - 1:
        raise ArityError(f"|S| must lie in [1, {h.k - 1}], got {len(s)}")
    return h.degree(s)


def min_d_degree(h: Hypergraph, d: int) -> int:
    return h.min_degree(d)


def shadow(h: Hypergraph, ell: int) -> set[Edge]:
    return h.shadow(ell)


@dataclass(frozen=True)
class PathPattern:
    """``P_{a,x}``: an l-path with ``a`` edges padded by ``x`` isolated vertices per side."""

    k: int
    ell: int
    a: int
    x: int = 0

    def __post_init__(self):
        if not 1 <= self.ell < self.k:
            raise HypergraphError(f"need 1 <= ell < k, got ell={self.ell}, k={self.k}")
        if self.a < 0 or self.x < 0:
            raise HypergraphError("a and x must be nonnegative")

    @property
    def vertex_count(self) -> int:
        return 2 * self.x + self.ell + (self.k - self.ell) * self.a

    @property
    def core_count(self) -> int:
        return self.ell + (self.k - self.ell) * self.a

    def edge_positions(self) -> list[range]:
        step = self.k - self.ell
        return [range(self.x + i * step, self.x + i * step + self.k) for i in range(self.a)]


@dataclass(frozen=True)
class CycleWitness:
    order: tuple[int, ...]
    k: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    def window_edges(self) -> list[Edge]:
        n = len(self.order)
        step = self.k - self.ell
        return [
            tuple(sorted(self.order[(j * step + i) % n] for i in range(self.k)))
            for j in range(n // step)
        ]


def _check_distinct(t: Sequence[int]) -> None:
    if len(set(t)) != len(t):
        raise HypergraphError(f"ordered tuple repeats a vertex: {tuple(t)}")


def spans_labeled_copy(h: Hypergraph, t: Sequence[int], pattern: PathPattern) -> bool:
    if len(t) != pattern.vertex_count:
        raise ArityError(f"pattern needs {pattern.vertex_count} vertices, got {len(t)}")
    if pattern.k != h.k:
        raise ArityError(f"pattern is {pattern.k}-uniform but graph is {h.k}-uniform")
    _check_distinct(t)
    return all(h.has_edge(t[i] for i in pos) for pos in pattern.edge_positions())


def spans_path(h: Hypergraph, t: Sequence[int], ell: int) -> bool:
    """True iff ``t`` (length l + a(k-l), a >= 1) spans an l-path in ``h``."""
    step = h.k - ell
    if len(t) < h.k or (len(t) - ell) % step:
        return False
    return spans_labeled_copy(h, t, PathPattern(h.k, ell, (len(t) - ell) // step))


def _check_witness_shape(h: Hypergraph, w: CycleWitness) -> None:
    if w.k != h.k:
        raise MalformedWitnessError(f"witness is for k={w.k}, graph has k={h.k}")
    if not 1 <= w.ell < w.k:
        raise MalformedWitnessError(f"need 1 <= ell < k, got ell={w.ell}")
    step = w.k - w.ell
    if h.n % step:
        raise MalformedWitnessError(f"n={h.n} is not divisible by k-ell={step}")
    if h.n // step < 3:
        raise MalformedWitnessError(f"cycle would have {h.n // step} < 3 edges")


def first_violation(h: Hypergraph, w: CycleWitness) -> tuple[str, int] | None:
    """Return ``("coverage", position)`` or ``("window", index)`` for the first defect."""
    _check_witness_shape(h, w)
    seen = set()
    for pos, v in enumerate(w.order):
        if not 0 <= v < h.n or v in seen:
            return ("coverage", pos)
        seen.add(v)
    if len(w.order) != h.n:
        return ("coverage", len(w.order))
    for j, e in enumerate(w.window_edges()):
        if e not in h.edges:
            return ("window", j)
    return None


def is_hamiltonian_cycle(h: Hypergraph, w: CycleWitness) -> bool:
    return first_violation(h, w) is None


# --- text format -------------------------------------------------------------


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.k} {h.n} {len(h)}"]
    lines.extend(" ".join(map(str, e)) for e in h.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer token") from exc
    if not rows:
        raise FormatError("missing header line 'k n m'")
    lineno, header = rows[0]
    if len(header) != 3:
        raise FormatError(f"line {lineno}: header must be 'k n m'")
    k, n, m = header
    if len(rows) - 1 != m:
        raise FormatError(f"header declares {m} edges, found {len(rows) - 1}")
    edges = []
    for lineno, e in rows[1:]:
        if len(e) != k:
            raise FormatError(f"line {lineno}: expected {k} vertices")
        if any(b <= a for a, b in zip(e, e[1:])):
            raise FormatError(f"line {lineno}: vertices must be strictly ascending")
        if e[0] < 0 or e[-1] >= n:
            raise FormatError(f"line {lineno}: vertex out of range")
        edges.append(tuple(e))
    if len(set(edges)) != len(edges):
        raise FormatError("duplicate edge")
    try:
        return Hypergraph(k, n, edges)
    except HypergraphError as exc:
        raise FormatError(str(exc)) from exc


def read_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_hypergraph(h))


def format_witness(order: Sequence[int]) -> str:
    return " ".join(map(str, order)) + "\n"


def parse_witness(text: str) -> tuple[int, ...]:
    toks = [tok for line in text.splitlines() if not line.lstrip().startswith("#") for tok in line.split()]
    try:
        return tuple(int(tok) for tok in toks)
    except ValueError as exc:
        raise FormatError("witness must be whitespace-separated integers") from exc
