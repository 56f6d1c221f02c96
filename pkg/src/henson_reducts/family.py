"""The anti-chain ``I_n`` and Henson digraphs with maximal automorphism groups.

``I_n`` is the linear order on ``n`` points with the consecutive edges and the
edge between the ends reversed.  Forbidding a set of them together with all
one-point extensions of a blocker tournament gives a family of forbidden sets
whose classes are pairwise distinct.  Vertices are 0-based internally;
:func:`cycle_census` and :func:`embedding_report` use 1-based labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .digraph import Digraph, Tournament, embeds, find_embedding, linear_order, reverse, sources_and_sinks, switch, three_cycles
from .errors import BudgetExceeded
from .forbidden import ForbiddenSet, ForbiddenSetError, in_forb, minus_violation, sw_violation

HIGH_CYCLE_THRESHOLD = 5


def make_In(n: int) -> Tournament:
    if n < 3:
        raise ValueError(f"I_n needs n >= 3, got {n}")
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            flipped = j == i + 1 or (i, j) == (0, n - 1)
            edges.add((j, i) if flipped else (i, j))
    return Tournament(n, frozenset(edges))


def cycle_census(t: Digraph) -> list[tuple[int, int, int]]:
    """3-cycles of ``t`` as sorted 1-based triples, in lexicographic order."""
    return sorted(tuple(sorted(v + 1 for v in c)) for c in three_cycles(t))


def expected_In_cycles(n: int) -> list[tuple[int, int, int]]:
    """The closed-form list: ``(1, k, n)`` for ``3 <= k <= n-2`` and the consecutive triples."""
    fan = [(1, k, n) for k in range(3, n - 1)]
    runs = [(i, i + 1, i + 2) for i in range(1, n - 1)]
    return sorted(fan + runs)


def high_cycle_vertices(t: Digraph, threshold: int = HIGH_CYCLE_THRESHOLD) -> frozenset:
    return frozenset(v for v, c in enumerate(t.cycle_counts) if c > threshold)


# -- tournament enumeration --------------------------------------------------


def one_point_extensions(t: Digraph) -> list[Tournament]:
    """All tournaments ``t`` plus one vertex, up to isomorphism (least canonical code first)."""
    n = t.n
    seen: dict[bytes, Tournament] = {}
    for mask in range(1 << n):
        edges = set(t.edges)
        for v in range(n):
            edges.add((n, v) if (mask >> v) & 1 else (v, n))
        ext = Tournament(n + 1, frozenset(edges))
        seen.setdefault(ext.canonical_code, ext)
    return [seen[c] for c in sorted(seen)]


def tournaments(n: int, budget: int | None = None) -> list[Tournament]:
    """All ``n``-vertex tournaments up to isomorphism, grown one vertex at a time."""
    level = [Tournament(1, frozenset())]
    spent = 0
    for _ in range(1, n):
        seen: dict[bytes, Tournament] = {}
        for t in level:
            spent += 1 << t.n
            if budget is not None and spent > budget:
                raise BudgetExceeded(f"tournament generation exceeded {budget} candidates")
            for ext in one_point_extensions(t):
                seen.setdefault(ext.canonical_code, ext)
        level = [seen[c] for c in sorted(seen)]
    return level if n >= 1 else []


# -- blocker -------------------------------------------------------------------


@dataclass
class Blocker:
    """A tournament with a source, no sink, and at least three high-cycle vertices.

    The last condition rules out embeddings into every ``I_n``: an embedding
    injects the 3-cycles through a vertex into those through its image, and
    ``I_n`` has at most two vertices on more than five 3-cycles.
    """

    tournament: Tournament
    source: int
    high: frozenset
    checked_up_to: int

    @property
    def size(self) -> int:
        return self.tournament.n

    def recheck(self) -> bool:
        t = self.tournament
        sources, sinks = sources_and_sinks(t)
        if self.source not in sources or sinks:
            return False
        if len(high_cycle_vertices(t)) < 3:
            return False
        return not any(embeds(t, make_In(n)) for n in range(max(t.n, 3), self.checked_up_to + 1))

    def to_json(self) -> dict:
        return {
            "tournament": self.tournament.to_json(),
            "source": self.source,
            "high_cycle_vertices": sorted(self.high),
            "cycle_counts": list(self.tournament.cycle_counts),
            "no_embedding_into_I_n_for_n_up_to": self.checked_up_to,
        }


def _with_source(t: Tournament) -> Tournament:
    # new vertex 0 beats everything
    edges = {(u + 1, v + 1) for u, v in t.edges} | {(0, v + 1) for v in range(t.n)}
    return Tournament(t.n + 1, frozenset(edges))


def find_blocker(max_size: int = 8, budget: int = 200_000) -> Blocker:
    """Least blocker by size, then canonical code of the part below the source.

    A tournament with a source ``s`` is ``s`` dominating ``T - s``; ``s`` lies on
    no 3-cycle and ``T`` has a sink iff ``T - s`` does.  So the search runs over
    sink-free ``(n-1)``-tournaments with three high-cycle vertices.
    """
    if max_size < 4:
        raise ValueError("max_size must be at least 4")
    level = [Tournament(1, frozenset())]
    spent = 0
    for size in range(2, max_size + 1):
        rest = size - 1
        if rest > 1:
            seen: dict[bytes, Tournament] = {}
            for t in level:
                spent += 1 << t.n
                if spent > budget:
                    raise BudgetExceeded(f"blocker search exceeded {budget} candidates at size {size}")
                for ext in one_point_extensions(t):
                    seen.setdefault(ext.canonical_code, ext)
            level = [seen[c] for c in sorted(seen)]
        for t in level:
            if sources_and_sinks(t)[1] or len(high_cycle_vertices(t)) < 3:
                continue
            b = _with_source(t)
            blocker = Blocker(b, 0, high_cycle_vertices(b), 2 * b.n)
            if not blocker.recheck():
                raise AssertionError("blocker candidate failed its own recheck")
            return blocker
    raise BudgetExceeded(f"no blocker with at most {max_size} vertices")


# -- family sets ------------------------------------------------------------------


def validate_indices(indices: Iterable[int], blocker: Tournament) -> tuple[int, ...]:
    a = tuple(sorted(set(indices)))
    if not a:
        raise ForbiddenSetError("the index set must be non-empty")
    low = max(6, blocker.n + 2)
    bad = [n for n in a if n < low]
    if bad:
        raise ForbiddenSetError(f"indices must be >= {low} (blocker has {blocker.n} vertices); got {bad}")
    return a


def build_family_set(indices: Iterable[int], blocker: Tournament) -> ForbiddenSet:
    a = validate_indices(indices, blocker)
    return ForbiddenSet.of([make_In(n) for n in a] + one_point_extensions(blocker))


@dataclass
class MaximalityReport:
    minus_blocked: bool
    minus_witness: Tournament | None
    sw_blocked: bool
    sw_witness: tuple[Tournament, int] | None
    linear_orders_embed: bool
    linear_order_bound: int
    extension_blocking: bool
    extension_count: int

    @property
    def all_hold(self) -> bool:
        return self.minus_blocked and self.sw_blocked and self.linear_orders_embed and self.extension_blocking

    def recheck(self, t: ForbiddenSet, blocker: Tournament) -> bool:
        ok = True
        if self.minus_blocked:
            m = self.minus_witness
            ok &= m is not None and t.contains(m) and in_forb(reverse(m), t)
        if self.sw_blocked:
            ok &= self.sw_witness is not None
            if ok:
                m, v = self.sw_witness
                ok &= t.contains(m) and in_forb(switch(m, {v}), t)
        if self.linear_orders_embed:
            ok &= all(in_forb(linear_order(m), t) for m in range(1, self.linear_order_bound + 1))
        if self.extension_blocking:
            ok &= in_forb(blocker, t) and all(t.contains(e) for e in one_point_extensions(blocker))
        return bool(ok)

    def to_json(self) -> dict:
        sources = sorted(sources_and_sinks(self.minus_witness)[0]) if self.minus_witness is not None else []
        return {
            "minus_blocked": self.minus_blocked,
            "minus_witness": None if self.minus_witness is None else {"member": self.minus_witness.to_json(), "sources": sources},
            "sw_blocked": self.sw_blocked,
            "sw_witness": None
            if self.sw_witness is None
            else {"member": self.sw_witness[0].to_json(), "vertex": self.sw_witness[1]},
            "linear_orders_embed": self.linear_orders_embed,
            "linear_order_bound": self.linear_order_bound,
            "extension_blocking": self.extension_blocking,
            "blocker_extensions_checked": self.extension_count,
        }


def verify_maximality(t: ForbiddenSet, blocker: Tournament, k_audit: int = 12) -> MaximalityReport:
    """Re-derive the four facts that pin the automorphism group of the underlying graph.

    A copy of ``blocker`` sits in Forb(t) and every one-point tournament
    extension of it is forbidden, so no vertex is adjacent to all of that copy.
    """
    # prefer a member whose source reversal turns into a sink: with no source
    # left, the reversal cannot contain the blocker
    lose_source = [m for m in t.members if sources_and_sinks(m)[0] and not sources_and_sinks(reverse(m))[0]]
    mw = next((m for m in lose_source if in_forb(reverse(m), t)), None) or minus_violation(t)
    sw = sw_violation(t)
    exts = one_point_extensions(blocker)
    blocking = in_forb(blocker, t) and all(t.contains(e) for e in exts)
    linear = all(in_forb(linear_order(m), t) for m in range(1, k_audit + 1))
    return MaximalityReport(mw is not None, mw, sw is not None, sw, linear, k_audit, blocking, len(exts))


@dataclass
class DistinctnessCertificate:
    """``I_n`` is a member of one family set and lies in the class of the other."""

    n: int
    member_of: str
    first: tuple[int, ...]
    second: tuple[int, ...]

    def recheck(self, blocker: Tournament) -> bool:
        t1, t2 = build_family_set(self.first, blocker), build_family_set(self.second, blocker)
        inside, outside = (t1, t2) if self.member_of == "first" else (t2, t1)
        i_n = make_In(self.n)
        return inside.contains(i_n) and in_forb(i_n, outside)

    def to_json(self) -> dict:
        return {"n": self.n, "member_of": self.member_of, "first": list(self.first), "second": list(self.second)}


def distinguish_family(a1: Iterable[int], a2: Iterable[int], blocker: Tournament) -> DistinctnessCertificate:
    first, second = validate_indices(a1, blocker), validate_indices(a2, blocker)
    diff = sorted(set(first) ^ set(second))
    if not diff:
        raise ValueError("index sets are equal; nothing to distinguish")
    n = diff[0]
    cert = DistinctnessCertificate(n, "first" if n in first else "second", first, second)
    if not cert.recheck(blocker):
        raise AssertionError(f"I_{n} does not separate the two family sets")
    return cert


def embedding_report(s: Digraph, d: Digraph) -> list[int] | None:
    """1-based image of an embedding of ``s`` into ``d``, if any."""
    f = find_embedding(s, d)
    return None if f is None else [v + 1 for v in f]
