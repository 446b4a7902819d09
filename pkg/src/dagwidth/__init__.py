"""DAG-decompositions of width at most the circumference, and disjoint paths."""

from .cops import decompose, game_cop_number, run_strategy, simulate_game, strategy_to_decomposition
from .cycles import EXCEEDS, Cycle, circumference_bounded, extend_to_maximal_cycle, find_cycle_containing
from .decomposition import DagDecomposition, combine_components, validate
from .digraph import Digraph, bidirect, line_digraph, scc
from .estimators import CopNumber, DagDecomposer, LinkageSolver
from .exceptions import BudgetExceeded, CircumferenceError, InputError, InternalError, SimulationFault
from .linkage import (
    ARC,
    VERTEX,
    LinkageInstance,
    brute_force_linkage,
    dag_vertex_linkage,
    find_hitting_set_circ2,
    reduce_circ2_vertex,
    reduce_circ2_weak,
    solve_vertex_linkage_circ2,
    solve_weak_linkage_circ2,
    solve_weak_linkage_via_hitting_set,
    verify_linkage,
    weak_to_vertex_acyclic,
)

__version__ = "0.1.0"
