"""Closed-form second-moment, Janson, Chernoff and sharpness quantities.

Every product of large powers is evaluated in log space; the public
functions return plain floats (``inf`` when the true value overflows).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from math import comb

from .hypergraph import HypergraphError, PathPattern


class InapplicableRegime(HypergraphError):
    pass


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def log_falling(n: int, b: int) -> float:
    """log of n(n-1)...(n-b+1)."""
    if b > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(n - b + 1)


def log_phi(pattern: PathPattern, n: int, p: float) -> float:
    if n < 1:
        raise HypergraphError("n must be positive")
    if not 0.0 < p <= 1.0:
        raise HypergraphError(f"phi needs 0 < p <= 1, got {p}")
    if pattern.a < 1:
        raise HypergraphError("phi needs a pattern with at least one edge")
    edges = [frozenset(pos) for pos in pattern.edge_positions()]
    ln, lp = math.log(n), math.log(p)
    best = math.inf
    for r in range(1, len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            v = len(frozenset().union(*sub))
            best = min(best, v * ln + r * lp)
    return best


def phi(pattern: PathPattern, n: int, p: float) -> float:
    """Minimum of n^v p^e over the subgraphs of the pattern with at least one edge.

    Only edge subsets of the path (with the vertices they cover) are
    enumerated; any other subgraph adds vertices or drops edges and so
    cannot be smaller when n >= 1 and p <= 1.
    """
    return _exp(log_phi(pattern, n, p))


def log_delta_bound(s: int, f: int, n: float, p: float, phi_value: float) -> float:
    if s < 1 or f < 0 or n <= 0 or p <= 0 or phi_value <= 0:
        raise HypergraphError("delta_bound needs positive inputs")
    return s * math.log(2) + math.lgamma(s + 1) + 2 * s * math.log(n) + 2 * f * math.log(p) - math.log(phi_value)


def delta_bound(s: int, f: int, n: float, p: float, phi_value: float) -> float:
    """2^s s! n^(2s) p^(2f) / phi."""
    return _exp(log_delta_bound(s, f, n, p, phi_value))


def janson_lower_tail(lam: float, t: float, delta: float) -> float:
    """exp(-t^2 / (2 delta)), the Janson bound on P(X <= lam - t)."""
    if delta <= 0:
        raise HypergraphError("delta must be positive")
    if t < 0 or t > lam:
        raise HypergraphError(f"need 0 <= t <= lambda, got t={t}, lambda={lam}")
    return math.exp(-t * t / (2 * delta))


def chebyshev_tail(lam: float, delta: float) -> float:
    """Delta / lambda^2 bound on P(X >= 2 lambda), clamped to 1."""
    if lam <= 0:
        return 1.0
    return min(1.0, delta / (lam * lam))


def chernoff_tails(n: float, zeta: float, x: float) -> tuple[float, float]:
    """Bounds on P(Bin(n, zeta) >= n zeta + x) and P(Bin(n, zeta) <= n zeta - x)."""
    if x <= 0:
        raise HypergraphError("x must be positive")
    if not 0 < zeta < 1:
        raise HypergraphError("zeta must lie in (0, 1)")
    mean = n * zeta
    upper = math.exp(-x * x / (2 * mean + x / 3))
    lower = math.exp(-x * x / (2 * mean))
    return upper, lower


def markov_path_length(k: int, ell: int, alpha: float) -> int:
    return math.floor((1 / alpha - 1 - ell) / (k - ell) + 1e-12)


def sharpness_threshold(k: int, ell: int, alpha: float, n: int) -> float:
    """Edge probability below which H0 + G(n, p) misses an l-cycle with probability >= 1/2."""
    if not 1 <= ell < k:
        raise HypergraphError(f"need 1 <= ell < k, got ell={ell}")
    if ell == 1:
        return n ** -(k - 1) / (2 * k)
    a = markov_path_length(k, ell, alpha)
    if a < 1:
        raise InapplicableRegime(f"alpha={alpha} gives path length a={a} < 1")
    return _exp(-math.log(2) / a - (k - ell + ell / a) * math.log(n))


def thinning_probability(beta: float, b: int, a: int, n: int, p: float) -> float:
    """Selection probability beta / (2 b^2 n^(b-1) p^a) used by the disjoint-family argument."""
    return _exp(math.log(beta) - math.log(2 * b * b) - (b - 1) * math.log(n) - a * math.log(p))


@dataclass(frozen=True)
class BoundReport:
    k: int
    ell: int
    a: int
    x: int
    n: int
    p: float
    phi: float
    lam: float
    delta_bound: float
    janson_tail: float
    chebyshev_tail: float
    chernoff_tails: tuple[float, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["chernoff_tails"] = list(self.chernoff_tails)
        return d


def bound_report(k: int, ell: int, a: int, x: int, n: int, p: float) -> BoundReport:
    """Bounds for labeled copies of P_{a,x} in G^(k)(n, p).

    The Janson tail is evaluated at t = lambda/2; the Chernoff pair is for
    the edge count Bin(C(n, k), p) with deviation x = half its mean.
    """
    pattern = PathPattern(k, ell, a, x)
    b = pattern.vertex_count
    lphi = log_phi(pattern, n, p)
    phi_value = _exp(lphi)
    lam = _exp(log_falling(n, b) + a * math.log(p))
    ldelta = math.log(2) * b + math.lgamma(b + 1) + 2 * b * math.log(n) + 2 * a * math.log(p) - lphi
    delta = _exp(ldelta)
    if lam > 0 and delta > 0:
        janson = min(1.0, math.exp(-(lam / 2) ** 2 / (2 * delta))) if math.isfinite(delta) else 1.0
    else:
        janson = 1.0
    cheb = chebyshev_tail(lam, delta)
    big_n = comb(n, k)
    if 0 < p < 1 and big_n > 0:
        tails = chernoff_tails(big_n, p, big_n * p / 2)
    else:
        tails = (0.0, 0.0)
    return BoundReport(k, ell, a, x, n, p, phi_value, lam, delta, janson, cheb, tails)
