"""Iterated deletion of edges through low-degree l-sets."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import ArityError, Edge, Hypergraph, HypergraphError


@dataclass(frozen=True)
class ShaveResult:
    shaved: Hypergraph
    zeroed_sets: tuple[Edge, ...]
    low_vertices: frozenset[int]
    threshold: int
    vertex_bound: int = 0
    edges_removed: int = field(default=0)

    def summary(self) -> dict:
        return {
            "threshold": self.threshold,
            "vertex_bound": self.vertex_bound,
            "edges_before": len(self.shaved) + self.edges_removed,
            "edges_after": len(self.shaved),
            "edges_removed": self.edges_removed,
            "zeroed_sets": len(self.zeroed_sets),
            "low_vertices": len(self.low_vertices),
        }


def shave(
    h: Hypergraph,
    ell: int,
    threshold: int,
    vertex_bound: int = 0,
    rng: np.random.Generator | None = None,
) -> ShaveResult:
    """Delete the star of every l-set with degree in (0, threshold) until none remain.

    The worklist starts with the low l-sets in sorted order; passing ``rng``
    processes them in a random order instead.  The surviving edge set does
    not depend on the order.
    """
    if not 1 <= ell < h.k:
        raise ArityError(f"shaving needs 1 <= ell < k={h.k}, got {ell}")
    if threshold < 1:
        raise HypergraphError(f"threshold must be >= 1, got {threshold}")

    star: dict[Edge, set[Edge]] = {}
    for e in h.edges:
        for s in itertools.combinations(e, ell):
            star.setdefault(s, set()).add(e)

    low = sorted(s for s, es in star.items() if len(es) < threshold)
    if rng is not None:
        low = [low[i] for i in rng.permutation(len(low))]
    queue = deque(low)
    alive = set(h.edges)
    zeroed = []
    while queue:
        s = queue.popleft()
        es = star[s]
        if not es or len(es) >= threshold:
            continue
        zeroed.append(s)
        doomed = list(es)
        for e in doomed:
            alive.discard(e)
            for t in itertools.combinations(e, ell):
                bucket = star[t]
                bucket.discard(e)
                if t != s and 0 < len(bucket) < threshold:
                    queue.append(t)

    shaved = Hypergraph(h.k, h.n, alive)
    low_v, _ = classify_vertices(shaved, vertex_bound)
    return ShaveResult(
        shaved=shaved,
        zeroed_sets=tuple(zeroed),
        low_vertices=low_v,
        threshold=threshold,
        vertex_bound=vertex_bound,
        edges_removed=len(h) - len(alive),
    )


def classify_vertices(h: Hypergraph, bound: int) -> tuple[frozenset[int], frozenset[int]]:
    """Split the vertices into (degree < bound, the rest)."""
    if bound < 0:
        raise HypergraphError(f"bound must be nonnegative, got {bound}")
    low = frozenset(v for v in range(h.n) if h.vertex_degree(v) < bound)
    return low, frozenset(range(h.n)) - low
