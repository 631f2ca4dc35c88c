"""Random CNF constructions of bipartite graphs, with exact K_{2,2} analytics."""

from .analytics import (
    DegreeTrace,
    K22Report,
    ZetaTable,
    average_degree,
    count_k22,
    count_k22_codegree,
    count_k22_explicit,
    degree,
    degree_trace,
    degrees,
    distinct_neighborhood_count,
    edge_count,
    subset_zeta,
)
from .bounds import (
    chernoff_bound,
    cnf_size_lower_bound,
    edge_probability,
    expected_degree,
    expected_k22,
    expected_k22_bernoulli,
    implied_delta,
    k22_clause_survival,
    k22_probability,
)
from .errors import CapExceeded, ValidationError
from .graph import (
    ClauseSystem,
    ExplicitBipartiteGraph,
    MaskHistogram,
    adjacent,
    clause_graph_contains,
    mask_histogram,
    materialize,
    neighborhood,
)
from .harness import ExperimentConfig, compare_models, run_experiment
from .pruning import PrunedGraph, default_threshold, prune
from .random_model import (
    ModelParams,
    choose_clause_count,
    make_rng,
    replicate_seed,
    sample_bernoulli_graph,
    sample_cnf,
)

__version__ = "0.1.0"
