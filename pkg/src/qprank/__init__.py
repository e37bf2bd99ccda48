"""Classical and Szegedy-quantized PageRank on directed networks."""

from .analysis import (AttackReport, DegeneracyProfile, FidelitySweep, IprScaling,
                       PowerLawFit, attack_sensitivity, damping_sweep,
                       degeneracy_profile, fidelity, ipr, ipr_scaling,
                       loglog_slope, power_law_fit, rank_correlation, rank_vector,
                       top_nodes)
from .graph import (DirectedGraph, GeneratorParams, GraphFormatError,
                    benchmark_graph, generate, generate_binary_tree,
                    generate_hierarchical, generate_scale_free, graph_digest,
                    out_degree, parse_edge_list, parse_pajek, remove_nodes,
                    to_edge_list, to_pajek)
from .pagerank import (GoogleMatrix, HyperlinkMatrix, PowerResult,
                       StochasticMatrix, classical_pagerank, google_matrix,
                       hyperlink_matrix, patch_dangling, power_method,
                       second_eigenvalue_modulus)
from .szegedy import (DynamicalSubspace, QuantumRankSeries, SzegedyOperator,
                      apply_reflection, apply_swap, average_drift,
                      build_dynamical_subspace, build_operator, evolve,
                      evolve_spectral, initial_state, instantaneous_qpr,
                      quantum_pagerank, quantum_rank_series, two_step,
                      walk_operator)

__version__ = "0.1.0"
