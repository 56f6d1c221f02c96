"""Finite digraphs, tournaments and ordered digraphs.

Vertices are ``0 .. n-1``.  For an :class:`OrderedDigraph` the linear order is
the index order.  All values are immutable; derived data (bitmasks, canonical
form, 3-cycle counts) is cached on first use.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .canon import canonical_form

CanonicalCode = bytes


class DigraphError(ValueError):
    """Raised for malformed digraph data (loops, 2-cycles, bad indices, ...)."""


class Rel(enum.Enum):
    """Relation carried by an ordered pair ``(u, v)``: ``E`` is ``u -> v``."""

    N = "N"
    E = "E"
    ES = "E*"

    @property
    def star(self) -> "Rel":
        """The relation of the swapped pair."""
        if self is Rel.E:
            return Rel.ES
        if self is Rel.ES:
            return Rel.E
        return Rel.N

    def __str__(self) -> str:
        return self.value


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Digraph:
    n: int
    edges: frozenset

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise DigraphError(f"vertex count must be a non-negative int, got {self.n!r}")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DigraphError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise DigraphError(f"loop at vertex {u}")
            if (v, u) in edges:
                raise DigraphError(f"edges ({u},{v}) and ({v},{u}) both present")
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def _make(cls, n: int, edges: Iterable[tuple[int, int]]):
        return cls(n, frozenset(edges))

    # -- adjacency -------------------------------------------------------

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        out = [0] * self.n
        for u, v in self.edges:
            out[u] |= 1 << v
        return tuple(out)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        inn = [0] * self.n
        for u, v in self.edges:
            inn[v] |= 1 << u
        return tuple(inn)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.out_masks[u] >> v) & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return self.has_edge(u, v) or self.has_edge(v, u)

    def relation(self, u: int, v: int) -> Rel:
        if self.has_edge(u, v):
            return Rel.E
        if self.has_edge(v, u):
            return Rel.ES
        return Rel.N

    def out_degree(self, v: int) -> int:
        return self.out_masks[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_masks[v].bit_count()

    def out_neighbors(self, v: int) -> list[int]:
        return list(_bits(self.out_masks[v]))

    def in_neighbors(self, v: int) -> list[int]:
        return list(_bits(self.in_masks[v]))

    def is_tournament(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    @cached_property
    def cycle_counts(self) -> tuple[int, ...]:
        """Number of directed 3-cycles through each vertex."""
        counts = []
        for v in range(self.n):
            inn = self.in_masks[v]
            counts.append(sum((self.out_masks[w] & inn).bit_count() for w in _bits(self.out_masks[v])))
        return tuple(counts)

    # -- structure -------------------------------------------------------

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        """Induced sub-digraph; ``vertices[i]`` becomes vertex ``i``."""
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise DigraphError("repeated vertex in induced()")
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Digraph(len(vertices), frozenset(edges))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Image under the bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise DigraphError("relabel() needs a permutation of the vertices")
        return self._make(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def forget(self) -> "Digraph":
        """The plain digraph (drops subclass and its invariants)."""
        return Digraph(self.n, self.edges)

    # -- canonical form --------------------------------------------------

    @cached_property
    def _canon(self) -> tuple[bytes, list[int]]:
        return canonical_form(self.n, (self.out_masks, self.in_masks))

    @property
    def canonical_code(self) -> CanonicalCode:
        return self._canon[0]

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: dict):
        try:
            n = data["n"]
            edges = [tuple(e) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise DigraphError(f"digraph JSON needs 'n' and 'edges': {exc}") from None
        if any(len(e) != 2 for e in edges):
            raise DigraphError("each edge must be a pair [u, v]")
        return cls(n, frozenset(edges))

    def to_dot(self, name: str = "D") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {v};" for v in range(self.n)]
        lines += [f"  {u} -> {v};" for u, v in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, edges={sorted(self.edges)})"


class Tournament(Digraph):
    """A digraph with exactly one edge between any two distinct vertices."""

    def _validate(self) -> None:
        if not self.is_tournament():
            raise DigraphError(f"not a tournament: {len(self.edges)} edges on {self.n} vertices")

    @classmethod
    def of(cls, d: Digraph) -> "Tournament":
        return d if isinstance(d, Tournament) else cls(d.n, d.edges)


class OrderedDigraph(Digraph):
    """A digraph whose linear order is the index order ``0 < 1 < ... < n-1``."""

    @classmethod
    def of(cls, d: Digraph) -> "OrderedDigraph":
        return d if isinstance(d, OrderedDigraph) else cls(d.n, d.edges)

    def order_reversed(self) -> "OrderedDigraph":
        """Same digraph with the opposite linear order (vertex ``i`` becomes ``n-1-i``)."""
        return OrderedDigraph.of(self.relabel([self.n - 1 - v for v in range(self.n)]))


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph; ``edges`` holds pairs ``(u, v)`` with ``u < v``."""

    n: int
    edges: frozenset

    def __post_init__(self) -> None:
        norm = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        for u, v in norm:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise DigraphError(f"bad graph edge ({u},{v})")
        object.__setattr__(self, "edges", norm)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.adj_masks[u] >> v) & 1)

    def symmetric_edges(self) -> frozenset:
        return self.edges | frozenset((v, u) for u, v in self.edges)

    @cached_property
    def _canon(self) -> tuple[bytes, list[int]]:
        return canonical_form(self.n, (self.adj_masks,))

    @property
    def canonical_code(self) -> CanonicalCode:
        return self._canon[0]

    def has_clique(self, k: int) -> bool:
        def grow(cand: int, size: int) -> bool:
            if size == k:
                return True
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                if grow(cand & self.adj_masks[v], size + 1):
                    return True
            return False

        return grow((1 << self.n) - 1, 0)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph(len(vertices), frozenset((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}


# -- constructors -------------------------------------------------------------


def empty_digraph(n: int) -> Digraph:
    return Digraph(n, frozenset())


def linear_order(n: int) -> Tournament:
    """``L_n``: edges ``i -> j`` for all ``i < j``."""
    return Tournament(n, frozenset(itertools.combinations(range(n), 2)))


def three_cycle() -> Tournament:
    return Tournament(3, frozenset({(0, 1), (1, 2), (2, 0)}))


def tournament_from_scores(n: int, beats) -> Tournament:
    """Tournament with ``u -> v`` iff ``beats(u, v)`` for ``u != v``."""
    return Tournament(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v and beats(u, v)))


# -- operations -----------------------------------------------------------------


def reverse(d: Digraph) -> Digraph:
    """Reverse every edge."""
    return d._make(d.n, ((v, u) for u, v in d.edges))


def switch(d: Digraph, a: Iterable[int]) -> Digraph:
    """Reverse the edges with exactly one endpoint in ``a``."""
    a = frozenset(a)
    for v in a:
        if not (0 <= v < d.n):
            raise DigraphError(f"vertex {v} out of range for n={d.n}")
    return d._make(d.n, ((v, u) if (u in a) != (v in a) else (u, v) for u, v in d.edges))


def underlying_graph(d: Digraph) -> Graph:
    return Graph(d.n, d.edges)


def canonical_code(d: Digraph) -> CanonicalCode:
    return d.canonical_code


def is_isomorphic(a: Digraph, b: Digraph) -> bool:
    return a.n == b.n and len(a.edges) == len(b.edges) and a.canonical_code == b.canonical_code


def three_cycles(d: Digraph) -> set[tuple[int, int, int]]:
    """All directed 3-cycles ``a -> b -> c -> a``, reported with the least vertex first."""
    found = set()
    for a in range(d.n):
        above = ~((1 << (a + 1)) - 1)
        for b in _bits(d.out_masks[a] & above):
            for c in _bits(d.out_masks[b] & d.in_masks[a] & above):
                found.add((a, b, c))
    return found


def sources_and_sinks(d: Digraph) -> tuple[frozenset, frozenset]:
    """Vertices with an out-edge (resp. in-edge) to every other vertex."""
    full = d.full_mask
    sources = frozenset(v for v in range(d.n) if d.out_masks[v] == full & ~(1 << v))
    sinks = frozenset(v for v in range(d.n) if d.in_masks[v] == full & ~(1 << v))
    return sources, sinks


def _search_embedding(s: Digraph, d: Digraph, induced: bool, anchor: tuple[int, int] | None = None):
    """Backtracking search for an embedding of ``s`` into ``d``.

    With ``induced`` non-edges of ``s`` must map to non-edges.  ``anchor=(u, x)``
    forces ``u -> x``.
    """
    if s.n > d.n:
        return None
    if s.n == 0:
        return ()
    s_cyc = s.cycle_counts
    # 3-cycles through a vertex can only grow under an embedding
    d_cyc = d.cycle_counts if any(s_cyc) else [0] * d.n
    static = []
    for u in range(s.n):
        so, si, sc = s.out_degree(u), s.in_degree(u), s_cyc[u]
        m = 0
        for x in range(d.n):
            if d.out_degree(x) >= so and d.in_degree(x) >= si and d_cyc[x] >= sc:
                m |= 1 << x
        if not m:
            return None
        static.append(m)
    if anchor is not None:
        u0, x0 = anchor
        static[u0] &= 1 << x0
        if not static[u0]:
            return None
    # most constrained pattern vertices first, keeping each next vertex linked to placed ones
    order = [min(range(s.n), key=lambda u: (static[u].bit_count(), u))]
    remaining = set(range(s.n)) - set(order)
    s_adj = [s.out_masks[u] | s.in_masks[u] for u in range(s.n)]
    while remaining:
        placed_mask = sum(1 << p for p in order)
        nxt = min(remaining, key=lambda u: (-(s_adj[u] & placed_mask).bit_count(), static[u].bit_count(), u))
        order.append(nxt)
        remaining.remove(nxt)
    d_full = d.full_mask
    d_nonadj = [d_full & ~(d.out_masks[x] | d.in_masks[x] | (1 << x)) for x in range(d.n)]
    image = [-1] * s.n

    def rec(i: int, used: int) -> bool:
        if i == s.n:
            return True
        u = order[i]
        cand = static[u] & ~used
        for j in range(i):
            w = order[j]
            fw = image[w]
            if (s.out_masks[w] >> u) & 1:
                cand &= d.out_masks[fw]
            elif (s.in_masks[w] >> u) & 1:
                cand &= d.in_masks[fw]
            elif induced:
                cand &= d_nonadj[fw]
            if not cand:
                return False
        for x in _bits(cand):
            image[u] = x
            if rec(i + 1, used | (1 << x)):
                return True
        image[u] = -1
        return False

    if rec(0, 0):
        return tuple(image)
    return None


def find_embedding(s: Digraph, d: Digraph) -> tuple[int, ...] | None:
    """Embedding of the tournament ``s`` into ``d`` as a tuple ``f`` with ``f[i]`` the image of ``i``.

    Raises ``TypeError`` for non-tournament patterns.
    """
    if not s.is_tournament():
        raise TypeError("embedding patterns must be tournaments")
    if s.n > d.n:
        return None
    if s.n == d.n and d.is_tournament():
        if s.canonical_code != d.canonical_code:
            return None
    return _search_embedding(s, d, induced=False)


def embeds(s: Digraph, d: Digraph) -> bool:
    return find_embedding(s, d) is not None


def find_induced_embedding(s: Digraph, d: Digraph) -> tuple[int, ...] | None:
    """Induced embedding of an arbitrary digraph ``s`` into ``d``."""
    return _search_embedding(s, d, induced=True)
