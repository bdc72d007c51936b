"""Hamiltonian l-cycles in randomly perturbed k-uniform hypergraphs via the absorbing method."""

from .hypergraph import (
    ArityError,
    CycleWitness,
    FormatError,
    Hypergraph,
    HypergraphError,
    MalformedWitnessError,
    PathPattern,
    degree,
    first_violation,
    is_hamiltonian_cycle,
    min_d_degree,
    shadow,
    spans_labeled_copy,
)
from .oracle import SearchBudget, count_labeled_copies, ell_path_exists, hamilton_exists
from .pipeline import PipelineConfig, PipelineResult, find_hamilton_cycle
from .random_models import RandomSpec, derive_seed, exposure_rounds, extremal_h0, gnp
from .shaving import shave

__all__ = [
    "ArityError",
    "CycleWitness",
    "FormatError",
    "Hypergraph",
    "HypergraphError",
    "MalformedWitnessError",
    "PathPattern",
    "PipelineConfig",
    "PipelineResult",
    "RandomSpec",
    "SearchBudget",
    "count_labeled_copies",
    "degree",
    "derive_seed",
    "ell_path_exists",
    "exposure_rounds",
    "extremal_h0",
    "find_hamilton_cycle",
    "first_violation",
    "gnp",
    "hamilton_exists",
    "is_hamiltonian_cycle",
    "min_d_degree",
    "shadow",
    "shave",
    "spans_labeled_copy",
]
