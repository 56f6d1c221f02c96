import itertools

import pytest

from henson_reducts import Digraph, Tournament, forbidden_set, linear_order, make_In, three_cycle


def all_digraphs(n):
    """Every labelled digraph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product(range(3), repeat=len(pairs)):
        edges = set()
        for (u, v), s in zip(pairs, states):
            if s == 1:
                edges.add((u, v))
            elif s == 2:
                edges.add((v, u))
        yield Digraph(n, frozenset(edges))


def brute_isomorphic(a, b):
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    return any(a.relabel(list(p)).edges == b.edges for p in itertools.permutations(range(a.n)))


def brute_embeds(s, d):
    for image in itertools.permutations(range(d.n), s.n):
        if all((image[u], image[v]) in d.edges for u, v in s.edges):
            return True
    return False


def source_over_c3():
    """A source dominating a 3-cycle."""
    return Tournament(4, frozenset({(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)}))


C3 = three_cycle()
L3 = linear_order(3)


@pytest.fixture
def c3_set():
    return forbidden_set(C3)


@pytest.fixture
def acceptance_sets():
    return {
        "C3": forbidden_set(C3),
        "L3": forbidden_set(L3),
        "C3,L3": forbidden_set(C3, L3),
        "I6": forbidden_set(make_In(6)),
    }
