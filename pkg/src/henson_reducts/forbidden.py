"""Forbidden tournament sets and membership in the hereditary class they define."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .digraph import (
    Digraph,
    DigraphError,
    Tournament,
    find_embedding,
    reverse,
    switch,
)


class ForbiddenSetError(ValueError):
    """Invalid forbidden set; ``index`` points at the offending member when known."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Violation:
    """A member of the forbidden set together with an embedding into some digraph."""

    member: Tournament
    embedding: tuple[int, ...]

    def to_json(self) -> dict:
        return {"member": self.member.to_json(), "embedding": list(self.embedding)}


@dataclass(frozen=True, eq=False)
class ForbiddenSet:
    """A finite non-empty set of tournaments, each on at least 3 vertices.

    Members are deduplicated up to isomorphism and kept in a deterministic
    order (size, then canonical code).  ``reduced`` drops members that embed
    another member; it defines the same class.
    """

    members: tuple[Tournament, ...] = field()

    def __post_init__(self) -> None:
        if not self.members:
            raise ForbiddenSetError("forbidden set must be non-empty")
        seen: dict[bytes, Tournament] = {}
        for i, t in enumerate(self.members):
            if not isinstance(t, Digraph) or not t.is_tournament():
                raise ForbiddenSetError(f"member {i} is not a tournament", i)
            if t.n < 3:
                raise ForbiddenSetError(
                    f"member {i} has {t.n} vertices; 1- and 2-element tournaments are degenerate", i
                )
            seen.setdefault(t.canonical_code, Tournament.of(t))
        ordered = tuple(sorted(seen.values(), key=lambda t: (t.n, t.canonical_code)))
        object.__setattr__(self, "members", ordered)

    @classmethod
    def of(cls, tournaments: Iterable[Digraph]) -> "ForbiddenSet":
        return cls(tuple(tournaments))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ForbiddenSet):
            return NotImplemented
        return self.codes == other.codes

    def __hash__(self) -> int:
        return hash(self.codes)

    @cached_property
    def codes(self) -> frozenset:
        return frozenset(t.canonical_code for t in self.members)

    @cached_property
    def reduced(self) -> tuple[Tournament, ...]:
        keep = []
        for t in self.members:
            if not any(s.n < t.n and find_embedding(s, t) is not None for s in keep):
                keep.append(t)
        return tuple(keep)

    @cached_property
    def _by_size(self) -> dict[int, frozenset]:
        out: dict[int, set] = {}
        for t in self.members:
            out.setdefault(t.n, set()).add(t.canonical_code)
        return {k: frozenset(v) for k, v in out.items()}

    @property
    def min_size(self) -> int:
        return self.members[0].n

    def contains(self, t: Digraph) -> bool:
        """Whether ``t`` is isomorphic to a member."""
        return t.is_tournament() and t.canonical_code in self._by_size.get(t.n, ())

    def to_json(self) -> dict:
        return {"tournaments": [t.to_json() for t in self.members]}

    @classmethod
    def from_json(cls, data: dict) -> "ForbiddenSet":
        if not isinstance(data, dict) or "tournaments" not in data:
            raise ForbiddenSetError("forbidden set JSON needs a 'tournaments' list")
        items = data["tournaments"]
        if not isinstance(items, list):
            raise ForbiddenSetError("'tournaments' must be a list")
        members = []
        for i, item in enumerate(items):
            try:
                d = Digraph.from_json(item)
            except DigraphError as exc:
                raise ForbiddenSetError(f"member {i}: {exc}", i) from None
            if not d.is_tournament():
                raise ForbiddenSetError(f"member {i} is not a tournament", i)
            if d.n < 3:
                raise ForbiddenSetError(f"member {i} has {d.n} vertices (need >= 3)", i)
            members.append(Tournament.of(d))
        return cls(tuple(members))

    @classmethod
    def loads(cls, text: str) -> "ForbiddenSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ForbiddenSetError(f"malformed JSON: {exc}") from None
        return cls.from_json(data)


def forbidden_witness(d: Digraph, t: ForbiddenSet) -> Violation | None:
    """A member of ``t`` embedded in ``d``, or ``None`` when ``d`` is in Forb(t)."""
    tournament_target = d.is_tournament()
    for m in t.reduced:
        if m.n > d.n:
            break
        if m.n == d.n and tournament_target:
            if m.canonical_code == d.canonical_code:
                return Violation(m, find_embedding(m, d))
            continue
        f = find_embedding(m, d)
        if f is not None:
            return Violation(m, f)
    return None


def in_forb(d: Digraph, t: ForbiddenSet) -> bool:
    return forbidden_witness(d, t) is None


def antichain_violation(t: ForbiddenSet) -> tuple[Tournament, Tournament, tuple[int, ...]] | None:
    """A pair ``(S, U, f)`` of distinct members with ``S`` embedded in ``U`` via ``f``."""
    for s in t.members:
        for u in t.members:
            if u is s or u.n <= s.n:
                continue
            f = find_embedding(s, u)
            if f is not None:
                return s, u, f
    return None


def is_antichain(t: ForbiddenSet) -> bool:
    return antichain_violation(t) is None


def minus_violation(t: ForbiddenSet) -> Tournament | None:
    """A member whose reversal embeds no member (so reversal leaves the class)."""
    for m in t.members:
        if in_forb(reverse(m), t):
            return m
    return None


def closed_under_minus(t: ForbiddenSet) -> bool:
    return minus_violation(t) is None


def sw_violation(t: ForbiddenSet) -> tuple[Tournament, int] | None:
    """A member and a vertex whose single-vertex switch embeds no member."""
    for m in t.members:
        for v in range(m.n):
            if in_forb(switch(m, {v}), t):
                return m, v
    return None


def closed_under_sw(t: ForbiddenSet) -> bool:
    return sw_violation(t) is None


def minimal_member(t: ForbiddenSet) -> Tournament:
    """A member of least size; ties go to the least canonical code."""
    return t.members[0]


def forbidden_set(*tournaments: Digraph) -> ForbiddenSet:
    return ForbiddenSet.of(tournaments)
