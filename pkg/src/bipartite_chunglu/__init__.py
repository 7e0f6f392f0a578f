"""Bipartite Chung-Lu random graphs, their one-mode projections, and clustering/closure predictions."""

__version__ = "0.1.0"

from .estimators import BipartiteChungLu, BipartiteProjector, DiscretePowerLaw
from .exceptions import DomainError, EmptyGraphError, FitError, ParameterError, ParseError, SizeError
from .fitting import PowerLawFit, fit_power_law
from .ingest import DatasetMeta, degrees_as_weights, load_bipartite_edgelist
from .projection import ProjectedGraph, multi_edge_rate, project
from .sampler import (
    BipartiteGraph,
    GroupPair,
    sample,
    sample_fast,
    sample_group_edges,
    sample_naive,
    sample_random_intersection,
)
from .stats import (
    CoefficientReport,
    GraphStats,
    coefficient_report,
    count_triangles,
    global_closure,
    global_clustering,
    local_closure,
    local_clustering,
    weight_binned_conditional,
)
from .theory import (
    MomentBundle,
    p_edge_asymptotic,
    p_edge_exact,
    p_wedge_exact,
    poisson_pmf,
    predict_closure,
    predict_expected_degree,
    predict_global_clustering,
    predict_local_clustering,
    predicted_projected_exponent,
)
from .weights import (
    AssumptionReport,
    PowerLawParams,
    Side,
    WeightSequence,
    cap,
    check_assumptions,
    moments,
    sample_power_law,
)
