"""Presentation graphs of right-angled Coxeter groups: the ladder family,
square-chain (CFS) certification, common-join queries, stability witnesses
and random-graph experiments."""

from .certify import (
    Classification,
    DivergenceReport,
    FlagSet,
    WitnessCertificate,
    classify_divergence,
    derived_flags,
    find_stable_cycle,
    verify_certificate,
)
from .gamma_builder import (
    GammaConstructionError,
    GammaParams,
    build_gamma,
    build_gamma_n,
    default_points,
    racg_presentation,
)
from .graph_core import (
    Graph,
    GraphError,
    VertexSet,
    build_graph,
    complement,
    induced_subgraph,
    is_induced_cycle,
    join_decomposition,
    link,
)
from .join_analysis import (
    JoinWitness,
    brute_force_common_join,
    common_join_nonadjacent,
    pair_in_common_join,
)
from .random_lab import ExperimentConfig, run_experiment, sample_gnp
from .square_cfs import ChainMode, Square, enumerate_induced_squares, is_cfs, square_chain_graph

__version__ = "0.1.0"
