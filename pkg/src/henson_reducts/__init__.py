"""Finite, certificate-producing checks for the reducts of Henson digraphs."""

from .behavior import (
    LEMMAS,
    Behavior,
    CaseReport,
    Verdict,
    apply_behavior,
    compose_behaviors,
    enumerate_behaviors,
    realize_over_independent,
    transform_star,
    verify_lemma_table,
)
from .digraph import (
    Digraph,
    Graph,
    OrderedDigraph,
    Rel,
    Tournament,
    embeds,
    find_embedding,
    is_isomorphic,
    linear_order,
    reverse,
    sources_and_sinks,
    switch,
    three_cycle,
    three_cycles,
    underlying_graph,
)
from .errors import BudgetExceeded, WitnessConstructionError
from .family import (
    build_family_set,
    distinguish_family,
    find_blocker,
    high_cycle_vertices,
    make_In,
    verify_maximality,
)
from .forbidden import (
    ForbiddenSet,
    closed_under_minus,
    closed_under_sw,
    forbidden_set,
    in_forb,
    is_antichain,
    minimal_member,
)
from .fraisse import build_approximation, connectivity_report, extend_one_point, free_amalgam, verify_extension_property
from .reducts import classify_reducts, classify_underlying_graph, realizable_underlying_graphs

__version__ = "0.1.0"
