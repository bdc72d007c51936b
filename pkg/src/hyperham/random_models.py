"""Seeded binomial random k-graphs, multi-round exposure and the extremal H0."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from .hypergraph import Hypergraph, HypergraphError

# Below this edge probability we draw the edge count first and then sample
# that many k-sets, instead of one Bernoulli draw per k-set.
SPARSE_CUTOFF = 0.01


def derive_seed(base: int, *keys: int) -> int:
    """Mix ``base`` with integer stream keys into a fresh 64-bit seed."""
    ss = np.random.SeedSequence(entropy=int(base) & (2**64 - 1), spawn_key=tuple(int(x) for x in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys))


@dataclass(frozen=True)
class RandomSpec:
    n: int
    k: int
    p: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise HypergraphError(f"p must lie in [0, 1], got {self.p}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExposurePlan:
    rounds: int
    per_round_p: float


def unrank_combination(index: int, n: int, k: int) -> tuple[int, ...]:
    """Lexicographic unranking of k-subsets of ``range(n)``."""
    out = []
    v = 0
    for remaining in range(k, 0, -1):
        while True:
            block = comb(n - v - 1, remaining - 1)
            if index < block:
                break
            index -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def gnp(spec: RandomSpec) -> Hypergraph:
    n, k, p = spec.n, spec.k, spec.p
    if n < k:
        raise HypergraphError(f"need n >= k, got n={n}, k={k}")
    total = comb(n, k)
    if p == 0.0:
        return Hypergraph.empty(k, n)
    if p == 1.0:
        return Hypergraph.complete(k, n)
    rng = np.random.default_rng(spec.seed)
    if p >= SPARSE_CUTOFF:
        chosen = np.flatnonzero(rng.random(total) < p)
        if total <= 200_000:
            combos = list(itertools.combinations(range(n), k))
            return Hypergraph(k, n, (combos[i] for i in chosen))
    else:
        m = int(rng.binomial(total, p))
        chosen = np.sort(rng.choice(total, size=m, replace=False))
    return Hypergraph(k, n, (unrank_combination(int(i), n, k) for i in chosen))


def split_exposure(p: float, rounds: int) -> ExposurePlan:
    """Per-round probability p' with ``(1-p')**rounds == 1-p``."""
    if not 0.0 <= p <= 1.0:
        raise HypergraphError(f"p must lie in [0, 1], got {p}")
    if rounds < 1:
        raise HypergraphError(f"need at least one round, got {rounds}")
    if p == 1.0:
        return ExposurePlan(rounds, 1.0)
    return ExposurePlan(rounds, -math.expm1(math.log1p(-p) / rounds))


def exposure_rounds(n: int, k: int, p: float, rounds: int, seed: int) -> list[Hypergraph]:
    """Independent ``G(n, p')`` draws whose union is distributed as ``G(n, p)``."""
    plan = split_exposure(p, rounds)
    return [gnp(RandomSpec(n, k, plan.per_round_p, derive_seed(seed, 0, i))) for i in range(rounds)]


def part_size(n: int, alpha: float) -> int:
    # guard against 0.29 * 100 == 28.999...
    return math.floor(alpha * n + 1e-9)


def extremal_h0(n: int, k: int, alpha: float) -> Hypergraph:
    """All k-sets meeting both A = first floor(alpha*n) vertices and B = the rest."""
    if not 0.0 < alpha < 1.0:
        raise HypergraphError(f"alpha must lie in (0, 1), got {alpha}")
    a = part_size(n, alpha)
    if a < 1 or a >= n:
        raise HypergraphError(f"degenerate partition |A|={a}, |B|={n - a}")
    return Hypergraph(k, n, (e for e in itertools.combinations(range(n), k) if e[0] < a <= e[-1]))
