import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henson_reducts import (
    Digraph,
    OrderedDigraph,
    Tournament,
    embeds,
    find_embedding,
    is_isomorphic,
    linear_order,
    make_In,
    reverse,
    sources_and_sinks,
    switch,
    three_cycle,
    three_cycles,
    underlying_graph,
)
from henson_reducts.digraph import DigraphError, Rel, find_induced_embedding

from conftest import C3, L3, all_digraphs, brute_embeds, brute_isomorphic, source_over_c3


@st.composite
def digraphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    edges = set()
    for u, v in itertools.combinations(range(n), 2):
        s = draw(st.integers(0, 2))
        if s == 1:
            edges.add((u, v))
        elif s == 2:
            edges.add((v, u))
    return Digraph(n, frozenset(edges))


@st.composite
def tournaments_st(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    edges = {(u, v) if draw(st.booleans()) else (v, u) for u, v in itertools.combinations(range(n), 2)}
    return Tournament(n, frozenset(edges))


def test_rejects_loops_and_two_cycles():
    with pytest.raises(DigraphError):
        Digraph(2, frozenset({(0, 0)}))
    with pytest.raises(DigraphError):
        Digraph(2, frozenset({(0, 1), (1, 0)}))
    with pytest.raises(DigraphError):
        Digraph(2, frozenset({(0, 2)}))


def test_tournament_must_be_complete():
    with pytest.raises(DigraphError):
        Tournament(3, frozenset({(0, 1)}))


def test_relation_reads_pairs():
    assert L3.relation(0, 1) is Rel.E
    assert L3.relation(1, 0) is Rel.ES
    assert Digraph(2, frozenset()).relation(0, 1) is Rel.N
    assert Rel.E.star is Rel.ES and Rel.N.star is Rel.N


def test_reverse_examples():
    assert is_isomorphic(reverse(C3), C3)
    s4 = source_over_c3()
    assert not is_isomorphic(reverse(s4), s4)


def test_switch_examples():
    d = make_In(6)
    assert switch(d, set()) == d
    assert switch(d, range(6)) == d
    for v in range(3):
        assert is_isomorphic(switch(C3, {v}), L3)
    with pytest.raises(DigraphError):
        switch(C3, {5})


def test_embeds_examples():
    f = find_embedding(C3, make_In(6))
    assert f is not None
    assert embeds(make_In(6), make_In(6))
    assert not embeds(make_In(6), make_In(7))
    assert not embeds(make_In(7), make_In(6))


def test_c3_embeds_in_i6_on_a_listed_triple():
    triples = {frozenset(c) for c in three_cycles(make_In(6))}
    assert frozenset({0, 1, 2}) in triples


def test_non_tournament_pattern_rejected():
    with pytest.raises(TypeError):
        find_embedding(Digraph(3, frozenset({(0, 1)})), L3)


def test_canonical_code_examples():
    assert C3.canonical_code == reverse(C3).canonical_code
    assert C3.canonical_code != L3.canonical_code


def test_three_cycles_of_linear_orders_is_empty():
    for n in range(1, 9):
        assert three_cycles(linear_order(n)) == set()


def test_three_cycles_rotation_least_first():
    assert three_cycles(C3) == {(0, 1, 2)}
    assert three_cycles(reverse(C3)) == {(0, 2, 1)}


def test_sources_and_sinks_examples():
    assert sources_and_sinks(L3) == (frozenset({0}), frozenset({2}))
    assert sources_and_sinks(C3) == (frozenset(), frozenset())
    for n in range(6, 13):
        assert sources_and_sinks(make_In(n)) == (frozenset(), frozenset())


def test_underlying_graph_examples():
    assert underlying_graph(C3).edges == {(0, 1), (0, 2), (1, 2)}
    assert underlying_graph(Digraph(4, frozenset())).edges == frozenset()
    assert len(underlying_graph(make_In(6)).edges) == 15


def test_json_round_trip_and_dot():
    d = make_In(6)
    assert Digraph.from_json(d.to_json()) == d
    assert "0 -> 2;" in d.to_dot() or "2 -> 0;" in d.to_dot()
    with pytest.raises(DigraphError):
        Digraph.from_json({"n": 2})


def test_order_reversed():
    d = OrderedDigraph(3, frozenset({(0, 1)}))
    assert d.order_reversed().edges == {(2, 1)}


def test_canonical_code_matches_brute_force_on_four_vertices():
    graphs = list(all_digraphs(4))
    rng = random.Random(3)
    sample = rng.sample(graphs, 120)
    for a in sample:
        for b in sample:
            assert (a.canonical_code == b.canonical_code) == brute_isomorphic(a, b)


@settings(max_examples=200, deadline=None)
@given(digraphs(), st.randoms(use_true_random=False))
def test_code_invariant_under_relabel(d, rng):
    perm = list(range(d.n))
    rng.shuffle(perm)
    assert d.relabel(perm).canonical_code == d.canonical_code


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_reverse_is_an_involution_preserving_the_graph(d):
    assert reverse(reverse(d)) == d
    assert underlying_graph(reverse(d)) == underlying_graph(d)


@settings(max_examples=200, deadline=None)
@given(digraphs(), st.sets(st.integers(0, 6)))
def test_switch_involution_and_complement(d, a):
    a = {v for v in a if v < d.n}
    assert switch(switch(d, a), a) == d
    assert switch(d, a) == switch(d, set(range(d.n)) - a)
    assert underlying_graph(switch(d, a)) == underlying_graph(d)


@settings(max_examples=150, deadline=None)
@given(tournaments_st(max_n=4), digraphs(max_n=6))
def test_embeds_matches_brute_force(s, d):
    assert embeds(s, d) == brute_embeds(s, d)


@settings(max_examples=150, deadline=None)
@given(tournaments_st(max_n=4), digraphs(max_n=7))
def test_embedding_witness_is_valid_and_cycles_inject(s, d):
    f = find_embedding(s, d)
    if f is None:
        return
    assert len(set(f)) == s.n
    assert all((f[u], f[v]) in d.edges for u, v in s.edges)
    for v in range(s.n):
        assert s.cycle_counts[v] <= d.cycle_counts[f[v]]


@settings(max_examples=100, deadline=None)
@given(tournaments_st(max_n=5))
def test_embeds_reflexive(t):
    assert embeds(t, t)


def test_embeds_transitive_on_small_tournaments():
    ts = [make_In(6), make_In(7), linear_order(4), three_cycle(), source_over_c3()]
    big = [linear_order(6), make_In(8), make_In(6)]
    for a in ts:
        for b in ts:
            for c in big:
                if embeds(a, b) and embeds(b, c):
                    assert embeds(a, c)


def test_induced_embedding_respects_non_edges():
    path = Digraph(3, frozenset({(0, 1), (1, 2)}))
    assert find_induced_embedding(path, L3) is None
    assert find_induced_embedding(path, Digraph(4, frozenset({(3, 0), (0, 2)}))) is not None
