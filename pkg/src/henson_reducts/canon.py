"""Canonical labeling of small coloured-pair structures.

A structure on ``n`` vertices is given by one adjacency bitmask list per pair
colour: ``masks[c][v]`` has bit ``w`` set when the pair ``(v, w)`` carries colour
``c + 1``.  Pairs in no mask have colour 0.  Digraphs use two colours (out, in),
simple graphs one (adjacent).

The labeling is the lexicographically least pair-colour string over the leaves
of an individualization-refinement search tree.  Automorphisms found at equal
leaves prune sibling branches, which keeps very symmetric inputs (empty graphs,
vertex-transitive tournaments) cheap.
"""

from __future__ import annotations

from typing import Sequence

Masks = Sequence[Sequence[int]]


def _cell_mask(cell: list[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _refine(cells: list[list[int]], masks: Masks) -> list[list[int]]:
    while True:
        cms = [_cell_mask(c) for c in cells]
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((m[v] & cm).bit_count() for m in masks for cm in cms)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    out.append(groups[sig])
            else:
                out.append(cell)
        cells = out
        if not changed:
            return cells


def _pair_colour(masks: Masks, u: int, v: int) -> int:
    for c, m in enumerate(masks):
        if (m[u] >> v) & 1:
            return c + 1
    return 0


def _leaf_code(n: int, masks: Masks, perm: list[int]) -> bytes:
    body = bytearray(n.to_bytes(2, "big"))
    for i in range(n):
        pi = perm[i]
        for j in range(i + 1, n):
            body.append(_pair_colour(masks, pi, perm[j]))
    return bytes(body)


def _orbit_of(v: int, autos: list[list[int]], n: int) -> set[int]:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for g in autos:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def canonical_form(n: int, masks: Masks) -> tuple[bytes, list[int]]:
    """Return ``(code, perm)`` where ``perm[i]`` is the vertex placed at position ``i``.

    Two structures get the same code iff they are isomorphic.
    """
    if n == 0:
        return (0).to_bytes(2, "big"), []
    best: list = [None, None]
    autos: list[list[int]] = []

    def search(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(cells, masks)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            perm = [c[0] for c in cells]
            code = _leaf_code(n, masks, perm)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, perm
            elif code == best[0]:
                g = [0] * n
                for bp, lp in zip(best[1], perm):
                    g[bp] = lp
                autos.append(g)
            return
        cell = cells[target]
        explored: list[int] = []
        for v in sorted(cell):
            if explored:
                fixing = [g for g in autos if all(g[p] == p for p in prefix)]
                if fixing:
                    orb = _orbit_of(v, fixing, n)
                    if any(e in orb for e in explored):
                        continue
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:], prefix + [v])
            explored.append(v)

    search([list(range(n))], [])
    return best[0], best[1]
