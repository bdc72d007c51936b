"""Monte Carlo sweeps over (n, p) with per-trial records and Wilson summaries."""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from .hypergraph import Hypergraph, HypergraphError, read_hypergraph
from .oracle import SearchBudget, hamilton_exists
from .pipeline import PipelineConfig, find_hamilton_cycle
from .random_models import RandomSpec, derive_seed, exposure_rounds, extremal_h0, gnp

SCHEMA = 1
MODELS = ("h0", "file", "gnp")
COLUMNS = [
    "row", "n", "p_index", "p", "trial", "seed", "outcome", "stage", "oracle",
    "successes", "trials", "rate", "ci_low", "ci_high", "trace", "wall_ms",
]


def geometric_grid(lo: float, hi: float, points: int) -> list[float]:
    """``points`` values from lo to hi with a constant ratio."""
    if points < 1 or lo <= 0 or hi < lo:
        raise HypergraphError("geometric grid needs points >= 1 and 0 < lo <= hi")
    if points == 1:
        return [float(lo)]
    return [float(v) for v in np.geomspace(lo, hi, points)]


@dataclass
class SweepSpec:
    k: int
    ell: int
    ns: list[int]
    ps: list[float]
    trials: int = 10
    seed: int = 0
    model: str = "h0"
    alpha: float = 0.3
    graph_path: str | None = None
    oracle_limit: int = 0
    workers: int = 1
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise HypergraphError("trials must be >= 1")
        if not self.ps or not self.ns:
            raise HypergraphError("the n-list and p-grid must be nonempty")
        if self.model not in MODELS:
            raise HypergraphError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.model == "file" and not self.graph_path:
            raise HypergraphError("model 'file' needs a graph path")
        if any(p < 0 for p in self.ps):
            raise HypergraphError("p values must be nonnegative")

    def header(self) -> list[str]:
        return [
            f"# schema={SCHEMA}",
            f"# k={self.k} ell={self.ell} model={self.model} alpha={self.alpha!r} trials={self.trials} seed={self.seed}",
            "# ns=" + ",".join(map(str, self.ns)),
            "# ps=" + ",".join(repr(p) for p in self.ps),
        ]


def host_graph(spec: SweepSpec, n: int, p: float = 0.0, seed: int = 0) -> Hypergraph:
    """The deterministic part of a trial; for ``gnp`` it is itself a G(n, p) sample."""
    if spec.model == "h0":
        return extremal_h0(n, spec.k, spec.alpha)
    if spec.model == "gnp":
        return gnp(RandomSpec(n, spec.k, p, derive_seed(seed, 1)))
    h = read_hypergraph(spec.graph_path)
    if h.n != n or h.k != spec.k:
        raise HypergraphError(f"graph file has k={h.k}, n={h.n}; sweep asks for k={spec.k}, n={n}")
    return h


def run_trial(spec: SweepSpec, n: int, p_index: int, trial: int) -> dict:
    p = min(1.0, spec.ps[p_index])
    seed = derive_seed(spec.seed, n, p_index, trial)
    start = time.perf_counter()
    h = host_graph(spec, n, p, seed)
    cfg = PipelineConfig(k=spec.k, ell=spec.ell, seed=seed, **spec.config)
    rounds = exposure_rounds(n, spec.k, p, cfg.rounds, seed)
    result = find_hamilton_cycle(h, p, cfg, rounds)
    oracle = ""
    if n <= spec.oracle_limit:
        oracle = hamilton_exists(h.union(*rounds), spec.ell, SearchBudget(2_000_000, 30_000)).status
    return {
        "row": "trial",
        "n": n,
        "p_index": p_index,
        "p": repr(spec.ps[p_index]),
        "trial": trial,
        "seed": seed,
        "outcome": result.outcome,
        "stage": result.stage or "",
        "oracle": oracle,
        "trace": json.dumps(result.trace, sort_keys=True, separators=(",", ":")),
        "wall_ms": round((time.perf_counter() - start) * 1000),
    }


def _run_packed(args):
    return run_trial(*args)


def wilson(successes: int, trials: int) -> tuple[float, float]:
    lo, hi = proportion_confint(successes, trials, alpha=0.05, method="wilson")
    return float(lo), float(hi)


def summary_row(n: int, p_index: int, p: float, successes: int, trials: int) -> dict:
    lo, hi = wilson(successes, trials)
    return {
        "row": "summary",
        "n": n,
        "p_index": p_index,
        "p": repr(p),
        "successes": successes,
        "trials": trials,
        "rate": f"{successes / trials:.6f}",
        "ci_low": f"{lo:.6f}",
        "ci_high": f"{hi:.6f}",
    }


def iter_trials(spec: SweepSpec) -> Iterator[dict]:
    jobs = [(spec, n, i, t) for n in spec.ns for i in range(len(spec.ps)) for t in range(spec.trials)]
    if spec.workers <= 1:
        for job in jobs:
            yield _run_packed(job)
        return
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        yield from pool.map(_run_packed, jobs)


def run_sweep(spec: SweepSpec, out: IO[str]) -> list[dict]:
    """Stream trial rows then one summary row per (n, p) to ``out``; returns the summaries.

    Rows are flushed as they arrive, so an interrupted sweep leaves every
    finished trial on disk.
    """
    for line in spec.header():
        out.write(line + "\n")
    writer = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    tally: dict[tuple[int, int], int] = {}
    try:
        for row in iter_trials(spec):
            writer.writerow(row)
            out.flush()
            key = (row["n"], row["p_index"])
            tally[key] = tally.get(key, 0) + (row["outcome"] == "success")
    finally:
        out.flush()
    summaries = []
    for n in spec.ns:
        for i, p in enumerate(spec.ps):
            row = summary_row(n, i, p, tally.get((n, i), 0), spec.trials)
            writer.writerow(row)
            summaries.append(row)
    out.flush()
    return summaries


def read_summaries(lines: Iterable[str]) -> list[dict]:
    body = [ln for ln in lines if not ln.startswith("#")]
    return [row for row in csv.DictReader(body) if row["row"] == "summary"]


def monotone_up_to_overlap(summaries: list[dict]) -> bool:
    """True when no later grid point is significantly below an earlier one.

    A drop counts only if the later Wilson interval lies entirely below the
    earlier one.
    """
    rows = [(float(r["rate"]), float(r["ci_low"]), float(r["ci_high"])) for r in summaries]
    for i, (_, lo_i, _) in enumerate(rows):
        for _, _, hi_j in rows[i + 1 :]:
            if hi_j < lo_i:
                return False
    return True


def default_workers() -> int:
    raw = os.environ.get("HYPERHAM_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise HypergraphError(f"HYPERHAM_WORKERS must be an integer, got {raw!r}") from None
