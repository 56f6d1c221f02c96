"""Finite approximations of the generic digraph of Forb(T).

The builder realizes one-point extension demands ``(S, tau)`` over small vertex
sets ``S``: ``tau[s]`` says how a new vertex ``w`` must relate to ``s``
(``"in"``: ``s -> w``, ``"out"``: ``w -> s``, ``"none"``: non-adjacent).  A
demand is realizable iff ``S`` plus such a ``w`` lies in Forb(T); relations of
``w`` outside ``S`` never matter for that, since a tournament through ``w``
only uses neighbours of ``w``.

Two construction routes are tried in turn.  The first searches circulant
digraphs on a prime number of vertices whose connection set is a union of
cyclotomic cosets; translation invariance means only subsets through vertex 0
need auditing.  The second adds one vertex per queued demand.  It is kept as a
fallback, since new vertices bring new demands faster than they are met once
the level is 2 or more.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph, DigraphError, OrderedDigraph, _bits
from .errors import BudgetExceeded
from .forbidden import ForbiddenSet, Violation, forbidden_witness

LINKS = ("in", "out", "none")


class ExtensionRefused(Exception):
    """The requested extension would embed a forbidden tournament."""

    def __init__(self, violation: Violation, digraph: Digraph):
        super().__init__(f"extension embeds a forbidden {violation.member.n}-tournament")
        self.violation = violation
        self.digraph = digraph


@dataclass(frozen=True)
class ExtensionSpec:
    """Relations of a new vertex to the target set, plus an optional order slot.

    ``slot`` is the index the new vertex takes; ``None`` appends it on top.
    """

    targets: Mapping[int, str]
    slot: int | None = None

    def __post_init__(self) -> None:
        targets = dict(self.targets)
        for v, link in targets.items():
            if link not in LINKS:
                raise ValueError(f"relation for vertex {v} must be one of {LINKS}, got {link!r}")
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class Amalgam:
    digraph: Digraph
    a_map: tuple[int, ...]
    b_map: tuple[int, ...]


def free_amalgam(a: Digraph, b: Digraph, glue: Mapping[int, int]) -> Amalgam:
    """Glue ``a`` and ``b`` along ``glue`` (a-vertex -> b-vertex), no edges across.

    Vertices of ``a`` keep their indices; unglued vertices of ``b`` follow in
    increasing order.  ``a_map``/``b_map`` give each input vertex's image.
    """
    glue = dict(glue)
    if len(set(glue.values())) != len(glue):
        raise DigraphError("glue is not injective")
    for x, y in glue.items():
        if not (0 <= x < a.n and 0 <= y < b.n):
            raise DigraphError(f"glue pair ({x},{y}) out of range")
    for x1, x2 in itertools.permutations(glue, 2):
        if a.relation(x1, x2) is not b.relation(glue[x1], glue[x2]):
            raise DigraphError(f"glue is not an isomorphism: pair ({x1},{x2}) differs")
    inverse = {y: x for x, y in glue.items()}
    b_map = []
    nxt = a.n
    for y in range(b.n):
        if y in inverse:
            b_map.append(inverse[y])
        else:
            b_map.append(nxt)
            nxt += 1
    edges = set(a.edges)
    edges.update((b_map[u], b_map[v]) for u, v in b.edges)
    return Amalgam(Digraph(nxt, frozenset(edges)), tuple(range(a.n)), tuple(b_map))


def _with_new_vertex(d: Digraph, targets: Mapping[int, str], slot: int | None) -> tuple[Digraph, int]:
    n = d.n
    pos = n if slot is None else slot
    if not (0 <= pos <= n):
        raise DigraphError(f"slot {slot} out of range")
    shift = [v if v < pos else v + 1 for v in range(n)]
    edges = {(shift[u], shift[v]) for u, v in d.edges}
    for s, link in targets.items():
        if not (0 <= s < n):
            raise DigraphError(f"target vertex {s} out of range")
        if link == "in":
            edges.add((shift[s], pos))
        elif link == "out":
            edges.add((pos, shift[s]))
    kind = OrderedDigraph if isinstance(d, OrderedDigraph) else Digraph
    return kind(n + 1, frozenset(edges)), pos


def _local_violation(d: Digraph, w: int, t: ForbiddenSet) -> Violation | None:
    """Forbidden tournament through ``w``; only ``w`` and its neighbours can host one."""
    local = [w] + [v for v in range(d.n) if v != w and d.adjacent(v, w)]
    hit = forbidden_witness(d.induced(local), t)
    if hit is None:
        return None
    return Violation(hit.member, tuple(local[i] for i in hit.embedding))


def extend_one_point(d: Digraph, spec: ExtensionSpec, t: ForbiddenSet) -> Digraph:
    """Add one vertex wired per ``spec`` (non-adjacent outside the targets).

    Assumes ``d`` is in Forb(t).  Raises :class:`ExtensionRefused` with the
    forbidden tournament when the result leaves the class.
    """
    out, w = _with_new_vertex(d, spec.targets, spec.slot)
    hit = _local_violation(out, w, t)
    if hit is not None:
        raise ExtensionRefused(hit, out)
    return out


# -- demands ------------------------------------------------------------------


@dataclass(frozen=True)
class Demand:
    """``S`` (sorted) and the link the new vertex must have to each element of ``S``."""

    subset: tuple[int, ...]
    links: tuple[str, ...]

    def to_json(self) -> dict:
        return {"subset": list(self.subset), "links": list(self.links)}


def _demand_shape(d: Digraph, demand: Demand) -> Digraph:
    """``S`` plus a new vertex, as a small digraph (new vertex last)."""
    sub = d.induced(demand.subset)
    out, _ = _with_new_vertex(sub, dict(enumerate(demand.links)), None)
    return out


def _realizer_mask(out_m: Sequence[int], in_m: Sequence[int], full: int, demand: Demand) -> int:
    """Vertices outside ``S`` that relate to ``S`` as the demand asks."""
    m = full
    for s, link in zip(demand.subset, demand.links):
        if link == "in":
            m &= out_m[s]
        elif link == "out":
            m &= in_m[s]
        else:
            m &= ~(out_m[s] | in_m[s])
        m &= ~(1 << s)
    return m


@dataclass
class Unmet:
    demand: Demand
    tag: str  # "forbidden" or "missing"
    witness: Violation | None = None

    def to_json(self) -> dict:
        out = {"demand": self.demand.to_json(), "tag": self.tag}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass
class ExtensionReport:
    level: int
    satisfied: int = 0
    unmet: list[Unmet] = field(default_factory=list)

    @property
    def missing(self) -> list[Unmet]:
        return [u for u in self.unmet if u.tag == "missing"]

    @property
    def forbidden(self) -> list[Unmet]:
        return [u for u in self.unmet if u.tag == "forbidden"]

    def to_json(self, include_forbidden: bool = False) -> dict:
        shown = self.unmet if include_forbidden else self.missing
        return {
            "level": self.level,
            "satisfied": self.satisfied,
            "missing": len(self.missing),
            "forbidden": len(self.forbidden),
            "unmet": [u.to_json() for u in shown],
        }


class _ShapeCache:
    """Realizability of labelled demand shapes (few distinct ones occur)."""

    def __init__(self, t: ForbiddenSet):
        self.t = t
        self._seen: dict[tuple, Violation | None] = {}

    def violation(self, shape: Digraph) -> Violation | None:
        key = (shape.n, shape.edges)
        if key not in self._seen:
            self._seen[key] = forbidden_witness(shape, self.t)
        return self._seen[key]


def _demands_over(subset: tuple[int, ...]) -> Iterable[Demand]:
    for links in itertools.product(LINKS, repeat=len(subset)):
        yield Demand(subset, links)


def _audit(
    d: Digraph,
    t: ForbiddenSet,
    subsets: Iterable[tuple[int, ...]],
    cache: _ShapeCache,
    report: ExtensionReport,
    stop_at_missing: bool = False,
) -> ExtensionReport:
    full = d.full_mask
    for subset in subsets:
        for demand in _demands_over(subset):
            hit = cache.violation(_demand_shape(d, demand))
            if hit is not None:
                report.unmet.append(Unmet(demand, "forbidden", hit))
            elif _realizer_mask(d.out_masks, d.in_masks, full, demand):
                report.satisfied += 1
            else:
                report.unmet.append(Unmet(demand, "missing"))
                if stop_at_missing:
                    return report
    return report


def _subsets(n: int, k: int) -> Iterable[tuple[int, ...]]:
    for size in range(0, k + 1):
        yield from itertools.combinations(range(n), size)


def _audit_chunk(args: tuple) -> ExtensionReport:
    d, t, k, chunk = args
    return _audit(d, t, chunk, _ShapeCache(t), ExtensionReport(level=k))


def verify_extension_property(d: Digraph, t: ForbiddenSet, k: int, workers: int = 1) -> ExtensionReport:
    """Audit every demand over every vertex set of size <= ``k``.

    Unrealizable demands are listed as ``forbidden`` with the tournament that
    the extension would create; realizable ones with no realizing vertex are
    ``missing``.  With ``workers > 1`` the subsets are split across processes;
    the report is the same, in the same order.
    """
    if workers <= 1:
        return _audit(d, t, _subsets(d.n, k), _ShapeCache(t), ExtensionReport(level=k))
    subsets = list(_subsets(d.n, k))
    size = -(-len(subsets) // (4 * workers))
    chunks = [(d, t, k, subsets[i : i + size]) for i in range(0, len(subsets), size)]
    report = ExtensionReport(level=k)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_audit_chunk, chunks):
            report.satisfied += part.satisfied
            report.unmet += part.unmet
    return report


# -- construction ---------------------------------------------------------------
#
# Two routes.  The main one searches cyclotomic circulants: on Z_p (p prime),
# i -> j iff j - i lies in a union of cosets of a multiplicative subgroup of odd
# order.  Odd order keeps -1 outside the subgroup, so a coset and its negative
# are distinct and each pair of them contributes "forward", "backward" or
# nothing.  Translations are automorphisms, so the forbidden check and the
# demand audit only need configurations through vertex 0.  The fallback is the
# one-point builder: FIFO over demands, each unrealized one answered by a new
# vertex with seeded random links elsewhere.  It seldom closes out for small
# forbidden sets (every new vertex brings fresh pair demands), hence the budget.


def _circulant(m: int, conn: Iterable[int]) -> Digraph:
    return Digraph(m, frozenset((i, (i + s) % m) for i in range(m) for s in conn))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def _primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in factors))


def _coset_pairs(p: int, q: int) -> list[tuple[frozenset, frozenset]]:
    """Cosets of the index-``q`` subgroup of Z_p^*, paired with their negatives."""
    g = _primitive_root(p)
    cosets = [frozenset(pow(g, i + q * j, p) for j in range((p - 1) // q)) for i in range(q)]
    return [(cosets[i], cosets[i + q // 2]) for i in range(q // 2)]


def _cyclotomic_candidates(p: int, rng: random.Random, per_index: int) -> Iterable[frozenset]:
    for h in sorted(h for h in range(1, p, 2) if (p - 1) % h == 0)[::-1]:
        pairs = _coset_pairs(p, (p - 1) // h)
        count = 3 ** len(pairs)
        if count <= per_index:
            picks = list(range(count))
            rng.shuffle(picks)
        else:
            picks = [rng.randrange(count) for _ in range(per_index)]
        for code in picks:
            conn: set[int] = set()
            for fwd, bwd in pairs:
                code, state = divmod(code, 3)
                if state:
                    conn |= (fwd, bwd)[state - 1]
            if conn:
                yield frozenset(conn)


def _circulant_in_forb(m: int, conn: frozenset, t: ForbiddenSet) -> bool:
    # every copy of a member can be translated to pass through vertex 0
    local = [0] + sorted(conn | {m - s for s in conn})
    edges = [(i, j) for i, u in enumerate(local) for j, v in enumerate(local) if (v - u) % m in conn]
    return forbidden_witness(Digraph(len(local), frozenset(edges)), t) is None


def _circulant_search(
    t: ForbiddenSet, n: int, k: int, seed: int, max_m: int, per_index: int, max_candidates: int
) -> Digraph | None:
    rng = random.Random(seed)
    cache = _ShapeCache(t)
    tried = 0
    for p in range(max(n, 3), max_m + 1):
        if not _is_prime(p):
            continue
        through0 = [(0,) + rest for size in range(k) for rest in itertools.combinations(range(1, p), size)]
        for conn in _cyclotomic_candidates(p, rng, per_index):
            tried += 1
            if tried > max_candidates:
                return None
            if not _circulant_in_forb(p, conn, t):
                continue
            d = _circulant(p, conn)
            if not _audit(d, t, through0, cache, ExtensionReport(level=k), stop_at_missing=True).missing:
                return d
    return None


class _Builder:
    def __init__(self, t: ForbiddenSet, k: int, rng: random.Random, cap: int):
        self.t = t
        self.k = k
        self.rng = rng
        self.cap = cap
        self.out: list[int] = []
        self.inn: list[int] = []
        self.queue: deque[Demand] = deque()
        self.cache = _ShapeCache(t)

    @property
    def n(self) -> int:
        return len(self.out)

    def snapshot(self, subset: Sequence[int] | None = None) -> Digraph:
        subset = range(self.n) if subset is None else subset
        pos = {v: i for i, v in enumerate(subset)}
        edges = [(pos[u], pos[v]) for u in subset for v in subset if (self.out[u] >> v) & 1]
        return Digraph(len(pos), frozenset(edges))

    def realized(self, demand: Demand) -> bool:
        return _realizer_mask(self.out, self.inn, (1 << self.n) - 1, demand) != 0

    def realizable(self, demand: Demand) -> bool:
        local = Demand(tuple(range(len(demand.subset))), demand.links)
        return self.cache.violation(_demand_shape(self.snapshot(demand.subset), local)) is None

    def _link(self, w: int, s: int, link: str) -> None:
        if link == "in":
            self.out[s] |= 1 << w
            self.inn[w] |= 1 << s
        elif link == "out":
            self.out[w] |= 1 << s
            self.inn[s] |= 1 << w

    def _unlink(self, w: int, s: int) -> None:
        self.out[s] &= ~(1 << w)
        self.inn[w] &= ~(1 << s)
        self.out[w] &= ~(1 << s)
        self.inn[s] &= ~(1 << w)

    def _link_ok(self, w: int, s: int) -> bool:
        # a new forbidden tournament would contain w and s, so it sits in their common neighbourhood
        common = (self.out[w] | self.inn[w]) & (self.out[s] | self.inn[s])
        local = [w, s] + list(_bits(common & ~((1 << w) | (1 << s))))
        if len(local) < self.t.min_size:
            return True
        return forbidden_witness(self.snapshot(local), self.t) is None

    def add_vertex(self, demand: Demand | None) -> int:
        if self.n >= self.cap:
            raise BudgetExceeded(f"approximation exceeded {self.cap} vertices")
        w = self.n
        self.out.append(0)
        self.inn.append(0)
        fixed = set()
        if demand is not None:
            for s, link in zip(demand.subset, demand.links):
                self._link(w, s, link)
                fixed.add(s)
        others = [v for v in range(w) if v not in fixed]
        self.rng.shuffle(others)
        for v in others:
            link = self.rng.choice(LINKS)
            if link == "none":
                continue
            self._link(w, v, link)
            if not self._link_ok(w, v):
                self._unlink(w, v)
        for size in range(0, self.k):
            for rest in itertools.combinations(range(w), size):
                self.queue.extend(_demands_over(rest + (w,)))
        return w

    def drain(self) -> None:
        while self.queue:
            demand = self.queue.popleft()
            if self.realized(demand) or not self.realizable(demand):
                continue
            self.add_vertex(demand)


def _one_point_build(t: ForbiddenSet, n: int, k: int, seed: int, cap: int) -> Digraph:
    b = _Builder(t, k, random.Random(seed), cap)
    b.add_vertex(None)
    b.drain()
    while b.n < n:
        b.add_vertex(None)
        b.drain()
    return b.snapshot()


def build_approximation(
    t: ForbiddenSet,
    n: int,
    k: int,
    seed: int,
    budget: int = 400,
    per_index: int = 243,
    max_candidates: int = 6000,
) -> OrderedDigraph:
    """Digraph in Forb(t) on >= ``n`` vertices realizing every realizable demand over <= ``k`` vertices.

    Deterministic in ``(t, n, k, seed)``.  ``budget`` caps the vertex count of
    both construction routes and ``max_candidates`` the number of circulants
    tried; :class:`BudgetExceeded` is raised when neither route finds a
    complete approximation.  The order is index order.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k == 0:
        return OrderedDigraph(n, frozenset())
    cap = max(n, budget)
    d = _circulant_search(t, n, k, seed, cap, per_index, max_candidates)
    if d is None:
        d = _one_point_build(t, n, k, seed, cap)
    return OrderedDigraph.of(d)


def connectivity_report(d: Digraph) -> list[list[float]]:
    """Least directed path length for each ordered pair (``math.inf`` when unreachable)."""
    dist = [[math.inf] * d.n for _ in range(d.n)]
    for a in range(d.n):
        dist[a][a] = 0
        seen = 1 << a
        frontier = 1 << a
        step = 0
        while frontier:
            step += 1
            nxt = 0
            for v in _bits(frontier):
                nxt |= d.out_masks[v]
            nxt &= ~seen
            for v in _bits(nxt):
                dist[a][v] = step
            seen |= nxt
            frontier = nxt
    return dist
