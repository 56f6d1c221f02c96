import itertools
import math
import random

import pytest

from henson_reducts import (
    Digraph,
    build_approximation,
    connectivity_report,
    extend_one_point,
    forbidden_set,
    free_amalgam,
    in_forb,
    linear_order,
    make_In,
    reverse,
    verify_extension_property,
)
from henson_reducts.digraph import DigraphError
from henson_reducts.errors import BudgetExceeded
from henson_reducts.fraisse import ExtensionRefused, ExtensionSpec

from conftest import C3, L3


def test_amalgam_of_two_edges():
    a = Digraph(2, frozenset({(0, 1)}))
    b = Digraph(2, frozenset({(0, 1)}))
    am = free_amalgam(a, b, {0: 0})
    assert am.digraph == Digraph(3, frozenset({(0, 1), (0, 2)}))
    assert am.b_map == (0, 2)


def test_amalgam_rejects_bad_glue():
    a = Digraph(2, frozenset({(0, 1)}))
    b = Digraph(2, frozenset())
    with pytest.raises(DigraphError):
        free_amalgam(a, b, {0: 0, 1: 1})
    with pytest.raises(DigraphError):
        free_amalgam(a, b, {0: 0, 1: 0})


def test_extension_closing_a_cycle_is_refused():
    edge = Digraph(2, frozenset({(0, 1)}))
    with pytest.raises(ExtensionRefused) as exc:
        extend_one_point(edge, ExtensionSpec({0: "out", 1: "in"}), forbidden_set(C3))
    assert set(exc.value.violation.embedding) == {0, 1, 2}


def test_isolated_extension_always_succeeds():
    d = make_In(6)
    out = extend_one_point(d, ExtensionSpec({}), forbidden_set(make_In(7)))
    assert out.n == 7 and out.edges == d.edges


def test_extension_slot_moves_the_new_vertex():
    edge = Digraph(2, frozenset({(0, 1)}))
    out = extend_one_point(edge, ExtensionSpec({0: "in"}, slot=0), forbidden_set(C3))
    assert out.edges == {(1, 2), (1, 0)}


def test_incremental_check_agrees_with_full_recheck():
    rng = random.Random(4)
    t = forbidden_set(C3)
    d = build_approximation(t, 10, 1, 3)
    for _ in range(200):
        targets = {v: rng.choice(("in", "out", "none")) for v in rng.sample(range(d.n), rng.randint(0, 4))}
        try:
            out = extend_one_point(d, ExtensionSpec(targets), t)
        except ExtensionRefused as exc:
            assert not in_forb(exc.digraph, t)
        else:
            assert in_forb(out, t)


def test_single_vertex_and_level_zero():
    d = build_approximation(forbidden_set(C3), 1, 0, 0)
    assert d.n == 1 and not d.edges
    assert not verify_extension_property(d, forbidden_set(C3), 0).missing


def test_single_vertex_level_one_has_three_missing():
    d = Digraph(1, frozenset())
    report = verify_extension_property(d, forbidden_set(C3), 1)
    assert len(report.missing) == 3 and not report.forbidden


def test_forbidden_demands_carry_witnesses():
    report = verify_extension_property(L3, forbidden_set(C3), 2)
    assert report.forbidden
    for u in report.forbidden:
        assert u.witness is not None and u.witness.member.n == 3


def test_build_c3_level_two():
    t = forbidden_set(C3)
    d = build_approximation(t, 20, 2, 7)
    assert d.n >= 20 and in_forb(d, t)
    assert not verify_extension_property(d, t, 2).missing


def test_build_is_deterministic():
    t = forbidden_set(C3)
    assert build_approximation(t, 20, 2, 7) == build_approximation(t, 20, 2, 7)
    assert build_approximation(t, 12, 1, 3) == build_approximation(t, 12, 1, 3)


def test_minus_closed_class_survives_reversal():
    t = forbidden_set(C3)
    assert in_forb(reverse(build_approximation(t, 20, 2, 1)), t)


@pytest.mark.parametrize("t", [forbidden_set(L3), forbidden_set(make_In(6)), forbidden_set(C3, L3)], ids=["L3", "I6", "C3L3"])
def test_level_one_builds_for_other_sets(t):
    d = build_approximation(t, 10, 1, 1)
    assert in_forb(d, t) and not verify_extension_property(d, t, 1).missing


def test_unreachable_level_raises_budget():
    with pytest.raises(BudgetExceeded):
        build_approximation(forbidden_set(L3), 10, 2, 1, budget=40, max_candidates=200)


def test_bad_arguments():
    with pytest.raises(ValueError):
        build_approximation(forbidden_set(C3), 0, 1, 0)
    with pytest.raises(ValueError):
        build_approximation(forbidden_set(C3), 3, -1, 0)


def test_parallel_audit_matches_serial():
    t = forbidden_set(C3)
    d = build_approximation(t, 20, 2, 7)
    a = verify_extension_property(d, t, 2)
    b = verify_extension_property(d, t, 2, workers=2)
    assert a.to_json(True) == b.to_json(True)


def test_connectivity_examples():
    dist = connectivity_report(L3)
    assert dist[0][2] == 1 and dist[2][0] == math.inf
    assert connectivity_report(Digraph(2, frozenset()))[0][1] == math.inf


def test_connectivity_on_c3_approximation():
    """Non-adjacent pairs meet through a common neighbour; adjacent ones may need three steps.

    A C3-free digraph with b -> a has no path a -> w -> b, so the reverse of an
    edge is never at distance 2.
    """
    d = build_approximation(forbidden_set(C3), 20, 2, 7)
    dist = connectivity_report(d)
    for a, b in itertools.permutations(range(d.n), 2):
        if not d.adjacent(a, b):
            assert dist[a][b] == 2
        elif (b, a) in d.edges:
            assert dist[a][b] == 3
