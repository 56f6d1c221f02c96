"""The lattice of closed supergroups of Aut(D, E), assembled from finite checks.

The lower part (Aut(D,E), <->, <sw>, <-,sw>) is decided exactly by closure of
the forbidden set.  The upper part depends on what the underlying graph is.
That is only refuted soundly (a finite non-homogeneity certificate) or
supported up to a stated scale; scale-tagged evidence is never a theorem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .digraph import Digraph, Graph, Rel, Tournament, linear_order
from .errors import BudgetExceeded
from .family import one_point_extensions, tournaments
from .forbidden import ForbiddenSet, closed_under_minus, closed_under_sw, in_forb

EXHAUSTIVE_GRAPH_LIMIT = 6
CERTIFICATE_BASE_LIMIT = 4

NODES = ("AutDE", "Minus", "Sw", "MinusSw", "AutGraph", "SwGamma", "MinusGamma", "SwMinusGamma", "SymD")

# covering relation of the full figure, bottom to top
FULL_ORDER = {
    "AutDE": {"Minus", "Sw"},
    "Minus": {"MinusSw"},
    "Sw": {"MinusSw"},
    "MinusSw": {"AutGraph"},
    "AutGraph": {"SwGamma", "MinusGamma"},
    "SwGamma": {"SwMinusGamma"},
    "MinusGamma": {"SwMinusGamma"},
    "SwMinusGamma": {"SymD"},
    "SymD": set(),
}

LABELS = {
    "AutDE": "Aut(D,E)",
    "Minus": "<->",
    "Sw": "<sw>",
    "MinusSw": "<-,sw>",
    "AutGraph": "Aut(D,graph)",
    "SwGamma": "<sw_graph>",
    "MinusGamma": "<-_graph>",
    "SwMinusGamma": "<sw_graph,-_graph>",
    "SymD": "Sym(D)",
}


# -- graphs ---------------------------------------------------------------------


def _labelled_graphs(m: int):
    pairs = list(itertools.combinations(range(m), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(m, frozenset(p for i, p in enumerate(pairs) if (mask >> i) & 1))


def graphs_up_to_iso(m: int) -> list[Graph]:
    seen: dict[bytes, Graph] = {}
    for g in _labelled_graphs(m):
        seen.setdefault(g.canonical_code, g)
    return [seen[c] for c in sorted(seen)]


def _orientations(g: Graph, t: ForbiddenSet):
    """Orientations of ``g`` lying in Forb(t), found by backtracking with pruning.

    Orienting one more edge only adds edges, so a partial orientation that
    leaves Forb(t) can be abandoned.
    """
    pairs = sorted(g.edges)

    def rec(i: int, edges: frozenset):
        if not in_forb(Digraph(g.n, edges), t):
            return
        if i == len(pairs):
            yield Digraph(g.n, edges)
            return
        u, v = pairs[i]
        yield from rec(i + 1, edges | {(u, v)})
        yield from rec(i + 1, edges | {(v, u)})

    yield from rec(0, frozenset())


def orientation_in_forb(g: Graph, t: ForbiddenSet) -> Digraph | None:
    return next(_orientations(g, t), None)


def realizable_underlying_graphs(t: ForbiddenSet, m: int) -> set[bytes]:
    """Canonical codes of the graphs on at most ``m`` vertices that some digraph in Forb(t) has."""
    if m < 1:
        raise ValueError("size bound must be at least 1")
    if m > EXHAUSTIVE_GRAPH_LIMIT:
        raise BudgetExceeded(f"graph enumeration is capped at {EXHAUSTIVE_GRAPH_LIMIT} vertices")
    out = set()
    for size in range(1, m + 1):
        for g in graphs_up_to_iso(size):
            if orientation_in_forb(g, t) is not None:
                out.add(g.canonical_code)
    return out


def clique_realizable(n: int, t: ForbiddenSet) -> Tournament | None:
    """An ``n``-tournament in Forb(t), i.e. an orientation of K_n."""
    return next((x for x in tournaments(n) if in_forb(x, t)), None)


# -- graph status ------------------------------------------------------------------


@dataclass
class NonHomogeneityCertificate:
    """Two digraphs in Forb(t) with the same underlying graph and a one-point graph extension.

    The new vertex is adjacent exactly to ``neighbourhood``.  Some orientation
    of it over ``realized`` stays in Forb(t) (``extension``); no orientation over
    ``blocked`` does.  So the underlying graph has a partial isomorphism (between
    the two copies) that does not extend.
    """

    blocked: Digraph
    realized: Digraph
    neighbourhood: tuple[int, ...]
    extension: Digraph

    def recheck(self, t: ForbiddenSet) -> bool:
        a, b = self.blocked, self.realized
        if a.n != b.n or not (in_forb(a, t) and in_forb(b, t)):
            return False
        if {frozenset(e) for e in a.edges} != {frozenset(e) for e in b.edges}:
            return False
        if not _extends(b, self.neighbourhood, self.extension) or not in_forb(self.extension, t):
            return False
        return not any(in_forb(x, t) for x in _one_point(a, self.neighbourhood))

    def to_json(self) -> dict:
        return {
            "blocked": self.blocked.to_json(),
            "realized": self.realized.to_json(),
            "neighbourhood": list(self.neighbourhood),
            "extension": self.extension.to_json(),
        }


def _one_point(d: Digraph, nbhd: tuple[int, ...]):
    n = d.n
    for mask in range(1 << len(nbhd)):
        edges = set(d.edges)
        for i, v in enumerate(nbhd):
            edges.add((n, v) if (mask >> i) & 1 else (v, n))
        yield Digraph(n + 1, frozenset(edges))


def _extends(d: Digraph, nbhd: tuple[int, ...], x: Digraph) -> bool:
    if x.n != d.n + 1 or x.induced(range(d.n)) != d:
        return False
    return {v for v in range(d.n) if x.relation(v, d.n) is not Rel.N} == set(nbhd)


def _split(orientations: list[Digraph], nbhd: tuple[int, ...], t: ForbiddenSet) -> NonHomogeneityCertificate | None:
    blocked = realized = ext = None
    for d in orientations:
        hit = next((x for x in _one_point(d, nbhd) if in_forb(x, t)), None)
        if hit is None:
            blocked = blocked or d
        elif realized is None:
            realized, ext = d, hit
        if blocked is not None and realized is not None:
            return NonHomogeneityCertificate(blocked, realized, nbhd, ext)
    return None


def find_non_homogeneity(t: ForbiddenSet, scale: int) -> NonHomogeneityCertificate | None:
    """Search certificates whose extension has at most ``scale`` vertices.

    Small bases (up to a few vertices) are searched exhaustively over labelled
    graphs and neighbourhoods.  Larger bases are restricted to tournaments
    obtained by deleting a vertex from a member, paired with a linear order.
    """
    for m in range(1, min(scale - 1, CERTIFICATE_BASE_LIMIT) + 1):
        for g in graphs_up_to_iso(m):
            orients = list(_orientations(g, t))
            if len(orients) < 2:
                continue
            for size in range(1, m + 1):
                for nbhd in itertools.combinations(range(m), size):
                    cert = _split(orients, nbhd, t)
                    if cert is not None:
                        return cert
    seen = set()
    for member in t.reduced:
        m = member.n - 1
        if m + 1 > scale or m <= CERTIFICATE_BASE_LIMIT:
            continue
        for v in range(member.n):
            base = member.induced([x for x in range(member.n) if x != v])
            if base.canonical_code in seen or not in_forb(base, t):
                continue
            seen.add(base.canonical_code)
            nbhd = tuple(range(m))
            if any(in_forb(x, t) for x in _one_point(base, nbhd)):
                continue
            line = linear_order(m)
            ext = linear_order(m + 1)
            if in_forb(line, t) and in_forb(ext, t):
                return NonHomogeneityCertificate(base, line, nbhd, ext)
    return None


@dataclass
class GraphStatus:
    kind: str  # RandomGraphEvidence | HensonGraphEvidence | NotHomogeneous | Inconclusive
    scale: int
    clique_bound: int | None = None
    certificate: NonHomogeneityCertificate | None = None
    note: str = ""

    def recheck(self, t: ForbiddenSet) -> bool:
        if self.kind == "NotHomogeneous":
            return self.certificate is not None and self.certificate.recheck(t)
        return True

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "scale": self.scale}
        if self.clique_bound is not None:
            out["clique_bound"] = self.clique_bound
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self) -> str:
        if self.kind == "HensonGraphEvidence":
            return f"HensonGraphEvidence({self.clique_bound}) at scale {self.scale}"
        return f"{self.kind} at scale {self.scale}"


def classify_underlying_graph(t: ForbiddenSet, k: int) -> GraphStatus:
    if k < 2:
        raise ValueError("scale must be at least 2")
    cert = find_non_homogeneity(t, k)
    if cert is not None:
        return GraphStatus("NotHomogeneous", k, certificate=cert)
    if k > EXHAUSTIVE_GRAPH_LIMIT:
        raise BudgetExceeded(
            f"no certificate found and positive evidence needs graphs on {k} > {EXHAUSTIVE_GRAPH_LIMIT} vertices"
        )
    missing = []
    for size in range(1, k + 1):
        missing += [g for g in graphs_up_to_iso(size) if orientation_in_forb(g, t) is None]
    if not missing:
        return GraphStatus("RandomGraphEvidence", k)
    n = next((c for c in range(2, k + 1) if clique_realizable(c, t) is None), None)
    if n is not None and all(g.has_clique(n) for g in missing):
        return GraphStatus("HensonGraphEvidence", k, clique_bound=n)
    return GraphStatus("Inconclusive", k, note=f"{len(missing)} non-realizable graph(s) not explained by a clique bound")


# -- lattice ---------------------------------------------------------------------


@dataclass
class ReductLattice:
    nodes: list[str]
    hasse_edges: list[tuple[str, str]]
    flags: dict
    graph_status: GraphStatus
    maximal: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "hasse_edges": [list(e) for e in self.hasse_edges],
            "flags": self.flags,
            "graph_status": self.graph_status.to_json(),
            "scale": self.graph_status.scale,
            "maximal": self.maximal,
        }

    def to_dot(self) -> str:
        lines = ["graph reducts {", "  rankdir=BT;"]
        for v in self.nodes:
            style = ", peripheries=2" if v in self.maximal else ""
            lines.append(f'  {v} [label="{LABELS[v]}"{style}];')
        lines += [f"  {a} -- {b};" for a, b in self.hasse_edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        out = [f"nodes: {', '.join(LABELS[v] for v in self.nodes)}"]
        out += [f"  {LABELS[a]} < {LABELS[b]}" for a, b in self.hasse_edges]
        out.append(f"minus exists: {self.flags['minus']}; sw exists: {self.flags['sw']}")
        out.append(f"underlying graph: {self.graph_status}")
        if self.maximal:
            out.append(f"maximal-closed: {', '.join(LABELS[v] for v in self.maximal)}")
        return "\n".join(out) + "\n"


def _above(v: str) -> set[str]:
    out, todo = set(), [v]
    while todo:
        for w in FULL_ORDER[todo.pop()]:
            if w not in out:
                out.add(w)
                todo.append(w)
    return out


def hasse(nodes: list[str]) -> list[tuple[str, str]]:
    """Covering pairs of the figure's order restricted to ``nodes``."""
    present = set(nodes)
    up = {v: _above(v) & present for v in nodes}
    return [
        (a, b)
        for a in nodes
        for b in sorted(up[a], key=NODES.index)
        if not any(b in up[c] for c in up[a])
    ]


def classify_reducts(t: ForbiddenSet, k: int) -> ReductLattice:
    minus, sw = closed_under_minus(t), closed_under_sw(t)
    status = classify_underlying_graph(t, k)
    lower = ["AutDE"] + (["Minus"] if minus else []) + (["Sw"] if sw else []) + (["MinusSw"] if minus and sw else [])
    maximal = []
    if status.kind == "RandomGraphEvidence":
        upper = ["AutGraph", "SwGamma", "MinusGamma", "SwMinusGamma"]
    elif status.kind == "HensonGraphEvidence":
        upper = ["AutGraph"]
    elif status.kind == "NotHomogeneous":
        # Aut of the graph is the top of the lower part, and maximal-closed
        upper = []
        maximal = [lower[-1]]
    else:
        upper = ["AutGraph"]
    nodes = [v for v in NODES if v in set(lower + upper + ["SymD"])]
    flags = {"minus": minus, "sw": sw}
    return ReductLattice(nodes, hasse(nodes), flags, status, maximal)
