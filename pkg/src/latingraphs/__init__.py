"""Random Latin square graphs and the random Cayley graphs they contain."""
from .cliques import (
    clique_cover_greedy,
    clique_number_exact,
    derived_symbols,
    greedy_coloring,
    greedy_list_coloring,
    independence_number_exact,
    pattern_counts,
    spread_subset,
    theory_bounds,
)
from .connectivity import (
    connectivity_report,
    distance_metrics,
    edge_connectivity,
    hamiltonian_cycle_exact,
    is_connected,
    paired_neighborhood_check,
    vertex_connectivity,
)
from .harness import ExperimentConfig, estimate_probability, run_experiment
from .latin import (
    GroupSpec,
    LatinSquare,
    cyclic_difference_table,
    group_table,
    paired_example_square,
    random_latin_square,
    symbol_permutation,
    validate_latin,
)
from .models import (
    Graph,
    MultiGraph,
    build_graph,
    build_multigraph,
    complement_graph,
    degree_profile,
    sample_symbols_k,
    sample_symbols_p,
)
from .spectral import (
    edge_discrepancy,
    entropy_H,
    expansion_check,
    gap_certifies_connected,
    hamiltonicity_threshold,
    spectrum,
    tail_bound,
)

__version__ = "0.1.0"
