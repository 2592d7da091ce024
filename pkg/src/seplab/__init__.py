"""seplab: a verification lab for time-bounded separation automata.

Exhaustive desk-scale oracles for priority-labelled game graphs, safety
automata that separate the walks of even- and odd-classified graphs, the
reduction from parity games to reachability games, fooling-word searches,
extremal set-family bounds, and the promise-disjointness box-cover core.
"""

from .caps import Caps, DEFAULT_CAPS
from .errors import CapExceeded, PreconditionError, SepLabError, ValidationError
from .graphs import (
    GameGraph,
    GraphParity,
    Letter,
    Word,
    classify_graph,
    count_game_graphs,
    encode_set_word,
    enumerate_game_graphs,
    hub_letter,
    is_cycles_prefix,
    is_walk,
    nodes_of_word,
)
from .automata import (
    ProductGraph,
    SafetyAutomaton,
    canonicalize,
    counter_automaton,
    counter_separator,
    delta_star,
    enumerate_automata,
    make_absorbing,
    product_reach,
)
from .separation import (
    AgreementReport,
    Counterexample,
    ParityArena,
    Reason,
    Refutation,
    SolveResult,
    Verdict,
    agreement_sweep,
    attractor,
    confirm_refutation,
    derive_time_bound,
    direct_winning_strategies,
    refute_small_separator,
    separator_winning_nodes,
    solve_parity_direct,
    solve_parity_via_separator,
    verify_time_t,
    verify_unrestricted,
)
from .fooling import (
    CloseTuple,
    DisjointTuple,
    FoolingCertificate,
    FoolingPair,
    SearchParams,
    block_order_less,
    block_word_length_margin,
    build_even_witness,
    build_odd_witness,
    chain_words,
    check_fooling_certificate,
    confirm_fooling_pair,
    derive_params,
    fooling_pairs_up_to,
    is_block_increasing,
    protocol_arithmetic_chain,
    search_close_tuple_word,
    search_fooling_pair,
    structured_search,
)
from .families import (
    SetFamily,
    are_t_far,
    binomial_lower_bound,
    borders,
    chernoff_two_sided,
    compress_pair,
    enumerate_ideals,
    fi_condition,
    is_ideal,
    is_left_compressed,
    kl_divergence,
    kl_quadratic_lower_bound,
    kl_with_lower_bound,
    leftof,
    max_product_bruteforce,
    mu_prob,
    far_pair_probability_bound,
    shift_family,
    shift_set,
    t_far_product_bound,
)
from .disjointness import (
    Box,
    CoverCertificate,
    DisjointnessInstance,
    check_cover,
    count_disjoint_tuples,
    disj_cc_lower_bound,
    disj_value,
    forcing_size_bound,
    gen_close_tuples,
    gen_disjoint_tuples,
    min_cover_bruteforce,
    min_forcing_family_size,
)

__version__ = "0.1.0"
