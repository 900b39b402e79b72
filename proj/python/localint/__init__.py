"""Causal effect estimation under local interference."""

from ._localint import (
    AdjacencyGraph,
    Dataset,
    EstimationError,
    OverlapError,
    SchemaError,
    ValidationError,
    adjacency_average,
    bootstrap,
    context_fraction,
    context_fraction_t_adjusted,
    dependence_summary,
    estimate,
    gen_basic,
    gen_counterexample_pair,
    gen_product,
    gen_t_dependent,
    inject_interference,
    inverse_square_distance,
    load_adjacency,
    load_dataset,
    save_dataset,
    toy_linear,
)

__all__ = [
    "AdjacencyGraph",
    "Dataset",
    "EstimationError",
    "OverlapError",
    "SchemaError",
    "ValidationError",
    "adjacency_average",
    "bootstrap",
    "context_fraction",
    "context_fraction_t_adjusted",
    "dependence_summary",
    "estimate",
    "gen_basic",
    "gen_counterexample_pair",
    "gen_product",
    "gen_t_dependent",
    "inject_interference",
    "inverse_square_distance",
    "load_adjacency",
    "load_dataset",
    "save_dataset",
    "toy_linear",
]
