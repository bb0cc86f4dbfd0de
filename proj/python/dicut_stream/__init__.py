"""Streaming Max-DICUT estimators, CSP instance lab, and hypergraph combinatorics.

Thin re-export of the compiled extension. Vertices, variables, and bias
classes are 0-based here; the text file formats written by the CLI are
1-based.
"""

from dicut_stream._core import (  # noqa: F401
    BiasThresholds,
    ConstraintDistribution,
    CspInstance,
    Graph,
    Hypergraph,
    KwiseHash,
    Predicate,
    RmdStream,
    Scheme,
    bounded_degree_dicut,
    brute_force_val,
    cc_part,
    clean,
    count_s_vectors,
    cycle_probability,
    density_matrix,
    estimate_h,
    exact_dicut,
    is_cycle_free,
    oblivious_estimate,
    random_bounded_degree_graph,
    random_graph,
    random_order_dicut,
    rho_inner_max,
    rho_min,
    sample_hypergraph,
    sample_rmd_stream,
    two_pass_dicut,
    val_at,
    verify_suite,
)

__all__ = [
    "BiasThresholds",
    "ConstraintDistribution",
    "CspInstance",
    "Graph",
    "Hypergraph",
    "KwiseHash",
    "Predicate",
    "RmdStream",
    "Scheme",
    "bounded_degree_dicut",
    "brute_force_val",
    "cc_part",
    "clean",
    "count_s_vectors",
    "cycle_probability",
    "density_matrix",
    "estimate_h",
    "exact_dicut",
    "is_cycle_free",
    "oblivious_estimate",
    "random_bounded_degree_graph",
    "random_graph",
    "random_order_dicut",
    "rho_inner_max",
    "rho_min",
    "sample_hypergraph",
    "sample_rmd_stream",
    "two_pass_dicut",
    "val_at",
    "verify_suite",
]

__version__ = "0.1.0"
