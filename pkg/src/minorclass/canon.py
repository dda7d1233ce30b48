"""Canonical codes, automorphism counts and an isomorphism oracle.

Canonical form: vertex colours are refined by iterated neighbour-colour
multisets (1-dimensional Weisfeiler-Leman); the candidate orderings are the
ones listing colour classes in their refined order with arbitrary order inside
a class, and the canonical edge mask is the maximum relabelled mask over those
orderings.  The refinement is isomorphism-invariant, so the maximum is too.
Automorphisms preserve the refined colouring, which makes the same machinery
count them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import ResourceCapError
from .graphs import Graph, pair_bit, pair_count

DEFAULT_VERTEX_CAP = 9


@dataclass(frozen=True)
class CanonicalCode:
    """Isomorphism-invariant identifier of an unlabelled graph."""

    code: bytes

    @property
    def hex(self) -> str:
        return self.code.hex()

    @classmethod
    def from_hex(cls, s: str) -> "CanonicalCode":
        return cls(bytes.fromhex(s))

    def __repr__(self) -> str:
        return f"CanonicalCode({self.hex})"


def _refine_colors(n: int, adj: tuple[int, ...]) -> list[int]:
    """Stable vertex colours under iterated degree/neighbour-colour refinement."""
    colors = [adj[v].bit_count() for v in range(n)]
    while True:
        sigs = []
        for v in range(n):
            nb = []
            m = adj[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                nb.append(colors[w])
            nb.sort()
            sigs.append((colors[v], tuple(nb)))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _row_bits(adj_v: int, order: list[int]) -> int:
    """Adjacency of v to the already-placed vertices, earliest position most significant."""
    r = 0
    for u in order:
        r = (r << 1) | (adj_v >> u & 1)
    return r


def _search_max_rows(n, adj, class_of_pos, members_by_class):
    """Maximum row sequence over class-respecting orderings (branch and bound)."""
    best: list[int] | None = None
    order: list[int] = []
    used = [False] * n

    def dfs(p: int, tight: bool):
        nonlocal best
        if p == n:
            if best is None or rows > best:
                best = rows.copy()
            return
        cls = class_of_pos[p]
        for v in members_by_class[cls]:
            if used[v]:
                continue
            r = _row_bits(adj[v], order)
            if tight and best is not None and r < best[p]:
                continue
            # tight = current prefix matches the incumbent's prefix (or no
            # incumbent exists yet); only then is position-wise pruning sound
            t2 = tight and (best is None or r == best[p])
            used[v] = True
            order.append(v)
            rows.append(r)
            dfs(p + 1, t2)
            rows.pop()
            order.pop()
            used[v] = False

    rows: list[int] = []
    dfs(0, True)
    assert best is not None
    return best


def _count_achievers(n, adj, class_of_pos, members_by_class, target_rows):
    """Number of class-respecting orderings realizing the target row sequence."""
    count = 0
    order: list[int] = []
    used = [False] * n

    def dfs(p: int):
        nonlocal count
        if p == n:
            count += 1
            return
        cls = class_of_pos[p]
        for v in members_by_class[cls]:
            if used[v]:
                continue
            if _row_bits(adj[v], order) != target_rows[p]:
                continue
            used[v] = True
            order.append(v)
            dfs(p + 1)
            order.pop()
            used[v] = False

    dfs(0)
    return count


@functools.lru_cache(maxsize=1 << 18)
def _canon_data(n: int, mask: int) -> tuple[int, int]:
    """(canonical edge mask, automorphism count) for the graph (n, mask)."""
    if n == 0:
        return 0, 1
    g = Graph(n, mask)
    adj = g.adjacency()
    colors = _refine_colors(n, adj)
    classes = sorted(set(colors))
    members_by_class = {c: [v for v in range(n) if colors[v] == c] for c in classes}
    class_of_pos = []
    for c in classes:
        class_of_pos.extend([c] * len(members_by_class[c]))
    rows = _search_max_rows(n, adj, class_of_pos, members_by_class)
    canon_mask = 0
    for p in range(n):
        # row bit for earlier position i sits at offset p-1-i; mask bit index is pair_bit
        for i in range(p):
            if rows[p] >> (p - 1 - i) & 1:
                canon_mask |= 1 << pair_bit(i + 1, p + 1)
    aut = _count_achievers(n, adj, class_of_pos, members_by_class, rows)
    return canon_mask, aut


def canonicalize(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> CanonicalCode:
    """Canonical code of g; equal codes iff isomorphic graphs."""
    if g.n > cap:
        raise ResourceCapError(f"canonicalize: {g.n} vertices exceeds cap {cap}")
    canon_mask, _ = _canon_data(g.n, g.mask)
    nbytes = max(1, (pair_count(g.n) + 7) // 8)
    return CanonicalCode(bytes([g.n]) + canon_mask.to_bytes(nbytes, "big"))


def canonical_graph(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Canonical representative of g's isomorphism class."""
    if g.n > cap:
        raise ResourceCapError(f"canonicalize: {g.n} vertices exceeds cap {cap}")
    canon_mask, _ = _canon_data(g.n, g.mask)
    return Graph(g.n, canon_mask)


def automorphism_count(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Order of the automorphism group, by exhaustive colour-respecting search."""
    if g.n > cap:
        raise ResourceCapError(f"automorphism_count: {g.n} vertices exceeds cap {cap}")
    _, aut = _canon_data(g.n, g.mask)
    return aut


def isomorphic_bruteforce(g: Graph, h: Graph) -> bool:
    """Permutation-based isomorphism oracle, independent of the canonical code path."""
    import itertools

    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    gadj = g.adjacency()
    hadj = h.adjacency()
    for perm in itertools.permutations(range(g.n)):
        ok = True
        for v in range(g.n):
            img = 0
            m = gadj[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                img |= 1 << perm[w]
            if img != hadj[perm[v]]:
                ok = False
                break
        if ok:
            return True
    return False
