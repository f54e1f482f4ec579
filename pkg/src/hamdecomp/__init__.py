"""Hamilton decompositions of dense regular digraphs by factor switching."""

from .chords import (
    ChordSequence,
    CycleOrder,
    UniversalWalk,
    chord_sequence,
    shifted_walk,
    universal_walk,
    verify_local_balance,
    verify_universal_walk,
)
from .decomposer import (
    DecomposeConfig,
    DecompositionReport,
    ProvedNone,
    WeightMatrix,
    atsp_domination_tour,
    decompose,
    exact_decompose,
    tillson_decompose,
    tournament_experiment,
)
from .digraph import (
    Digraph,
    Factorization,
    HamiltonDecomposition,
    OneFactor,
    complete_digraph,
    cycle_structure,
    validate,
    verify_hamilton_decomposition,
)
from .expander import ExpanderCertificate, ExpanderParams, blow_up, certify, robust_out_neighbourhood
from .flow import (
    DegreePrescription,
    Infeasible,
    degree_prescribed_subdigraph,
    hamilton_through_matching,
    one_factorization,
    regular_spanning_subdigraph,
)
from .formats import FORMAT_VERSION
from .hamilton import NoneExists, NotFound, find_hamilton
from .switching import (
    StuckReport,
    SwitchC4,
    SwitchK23,
    SwitchLog,
    apply_c4_exchange,
    apply_k23_exchange,
    find_c4_switch,
    find_k23_switch,
    k23_switches,
    merge_cycles_via_auxiliary,
    reduce_to_hamilton,
)

__version__ = "0.1.0"
