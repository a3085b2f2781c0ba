"""Graph 3-coloring by hybrid self-adaptive differential evolution.

Weight vectors evolved by DE/rand/1/bin with self-adapted ``F`` and ``CR``
are decoded into colorings by a permutation-guided DSatur heuristic and
refined by a saturation-ordered swap local search.
"""
from .graph import (
    DimacsFormatError,
    Graph,
    GraphType,
    complete_graph,
    cycle_graph,
    generate,
    load_dimacs,
    path_graph,
    save_dimacs,
)
from .decode import Coloring, Permutation, dsatur_decode, evaluate, penalty, weights_to_permutation
from .solver import ConfigError, Genotype, Population, RunResult, SolverConfig, solve
from .localsearch import local_search, swap_step
from .bench import (
    AblationReport,
    BenchReport,
    BenchRow,
    ablation,
    emit_ablation_csv,
    emit_csv,
    emit_trace,
    run_campaign,
    sweep,
)

__version__ = "0.1.0"
