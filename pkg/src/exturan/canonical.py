"""Canonical labelling via maximal edge-incidence bitstrings.

A hypergraph on n vertices is encoded as the 0/1 vector over all potential
s-subsets listed in colex order; the canonical form is the lexicographically
largest such vector over all vertex relabellings. Colex matters: the
subsets of {0..j} occupy a prefix of the positions, so a partial relabelling
pins down a bitstring prefix and the permutation search prunes hard.

The canonical form has the property that removing the edge with the largest
colex position preserves canonicity, which is what the orderly search in
:mod:`exturan.extremal` relies on.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

from .hypergraph import HypergraphError, UniformHypergraph, make

MAX_CANONICAL_VERTICES = 12  # permutation search envelope


@lru_cache(maxsize=None)
def colex_subsets(n: int, s: int) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(combinations(range(n), s), key=lambda t: tuple(reversed(t))))


@lru_cache(maxsize=None)
def colex_position(n: int, s: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(colex_subsets(n, s))}


def edge_positions(g: UniformHypergraph) -> tuple[int, ...]:
    pos = colex_position(g.n, g.s)
    return tuple(sorted(pos[e] for e in g.edges))


def _twin_reps(n: int, s: int, edge_set) -> list[int]:
    """Smallest representative per class of transposition-interchangeable
    vertices (swapping the two leaves the edge set invariant)."""
    links = [set() for _ in range(n)]
    for e in edge_set:
        for i, v in enumerate(e):
            links[v].add(e[:i] + e[i + 1:])
    rep = list(range(n))
    for u in range(n):
        if rep[u] != u:
            continue
        lu = links[u]
        for v in range(u + 1, n):
            if rep[v] != v:
                continue
            if {x for x in lu if v not in x} == {x for x in links[v] if u not in x}:
                rep[v] = u
    return rep


def _bits_of(n: int, s: int, edge_set) -> bytearray:
    pos = colex_position(n, s)
    bits = bytearray(comb(n, s))
    for e in edge_set:
        bits[pos[e]] = 1
    return bits


def _improve_once(n, s, edge_set, target):
    """Search for a relabelling whose bitstring exceeds ``target``.

    Returns the improved full bitstring, or None if ``target`` is maximal.
    Equal branches are explored (they may diverge later); transposition twins
    are tried once per class, which is sound because the twin swap extends
    any partial assignment to an equal-valued one.
    """
    reps = _twin_reps(n, s, edge_set)
    perm = [-1] * n
    used = [False] * n
    blocks = [colex_subsets(j, s - 1) for j in range(n)]
    bases = [comb(j, s) for j in range(n)]
    out: list[bytearray | None] = [None]

    def greedy_fill(j):
        # prefix already strictly better: any completion improves the target
        if j == n:
            bits = bytearray(len(target))
            pos = colex_position(n, s)
            inv = perm  # new -> old
            back = {old: new for new, old in enumerate(inv)}
            for e in edge_set:
                bits[pos[tuple(sorted(back[v] for v in e))]] = 1
            out[0] = bits
            return True
        for v in range(n):
            if not used[v]:
                perm[j] = v
                used[v] = True
                if greedy_fill(j + 1):
                    return True
                used[v] = False
        return False

    def dfs(j):
        tried = set()
        base = bases[j]
        block = blocks[j]
        for v in range(n):
            if used[v]:
                continue
            r = reps[v]
            if r in tried:
                continue
            tried.add(r)
            perm[j] = v
            verdict = 0
            for t, sub in enumerate(block):
                b = 1 if tuple(sorted([perm[a] for a in sub] + [v])) in edge_set else 0
                if b != target[base + t]:
                    verdict = 1 if b > target[base + t] else -1
                    break
            if verdict < 0:
                continue
            if verdict > 0:
                used[v] = True
                greedy_fill(j + 1)
                used[v] = False
                return True
            if j + 1 < n:
                used[v] = True
                if dfs(j + 1):
                    used[v] = False
                    return True
                used[v] = False
        return False

    return out[0] if dfs(0) else None


def _guard(n: int):
    if n > MAX_CANONICAL_VERTICES:
        raise HypergraphError(
            f"canonical labelling supports at most {MAX_CANONICAL_VERTICES} "
            f"vertices, got {n}"
        )


def is_canonical_raw(n: int, s: int, edge_set) -> bool:
    """Is the graph already its own canonical form?"""
    _guard(n)
    return _improve_once(n, s, edge_set, _bits_of(n, s, edge_set)) is None


def canonical_positions(n: int, s: int, edge_set) -> tuple[int, ...]:
    """Sorted colex positions of the canonical form's edges."""
    _guard(n)
    best = _bits_of(n, s, edge_set)
    while True:
        improved = _improve_once(n, s, edge_set, best)
        if improved is None:
            return tuple(i for i, b in enumerate(best) if b)
        best = improved


def canonical_form(g: UniformHypergraph) -> UniformHypergraph:
    """The canonical representative of g's isomorphism class."""
    subs = colex_subsets(g.n, g.s)
    return make(g.n, g.s, [subs[p] for p in canonical_positions(g.n, g.s, g.edge_set)])


def canonical_key(g: UniformHypergraph) -> str:
    """Label-independent string key, identical across relabellings."""
    pos = canonical_positions(g.n, g.s, g.edge_set)
    return f"s{g.s};n{g.n};" + "-".join(map(str, pos))
