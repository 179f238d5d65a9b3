"""Subset selection by weighted k-center: pick k points that jointly cover
the ground set and concentrate on low-margin (uncertain) points."""

from .dataset import (
    EmbeddingSet,
    ProbabilityMatrix,
    WeightVector,
    METRICS,
    load_embeddings,
    load_probabilities,
    load_weights,
    margin_weights,
    pairwise_distance,
)
from .nngraph import NeighborGraph, build_knn_graph, radius_query
from .wkcenter import (
    SelectionConfig,
    SubsetSolution,
    default_lambda,
    evaluate_solution,
    gamma_bounds,
    gamma_search,
    greedy_kcenter,
    kcenter_cost,
    make_gamma_grid,
    weighted_kcenter,
    weighted_kcenter_pq,
    weighted_objective,
)
from .parallel import PartitionPlan, make_partition, parallel_weighted_kcenter
from .oracle import (
    OracleResult,
    brute_force_kcenter,
    brute_force_weighted,
    optimal_gamma,
)
from .baselines import (
    margin_select,
    random_select,
    submodular_greedy,
)
from .instances import SyntheticSpec, gen_clusters, gen_worked_example

__version__ = "0.1.0"
