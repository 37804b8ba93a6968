"""Clique enumeration, subgraph containment, copy counting and exponent tables.

Copies are counted unlabelled: the number of embeddings divided by the
automorphism count of the pattern, with automorphisms found by brute force
(patterns are tiny). Containment search is deterministic: pattern vertices
are ordered by descending degree with index tie-breaks and host candidates
are tried in ascending order, so certificates are reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, prod

from .hypergraph import (
    BlowupSpec,
    Edge,
    HypergraphError,
    UniformHypergraph,
    blowup,
)

MAX_PATTERN_VERTICES = 8  # exact automorphism groups by brute force only


class UniformityMismatch(HypergraphError):
    """Host and pattern do not have the same uniformity."""


# ---------------------------------------------------------------------------
# embedding search engine
# ---------------------------------------------------------------------------


def _degree_table(n: int, edges) -> list[int]:
    deg = [0] * n
    for e in edges:
        for v in e:
            deg[v] += 1
    return deg


def _assignment_checks(pattern: UniformHypergraph, order):
    """Pattern edges that become fully assigned at each step of ``order``."""
    placed = set()
    checks = []
    for u in order:
        placed.add(u)
        checks.append([e for e in pattern.edges if u in e and set(e) <= placed])
    return checks


def _backtrack(host_n, host_edge_set, host_deg, pattern, order, pre, *, count_only):
    """Injective subgraph-embedding search; first mapping or total count."""
    pdeg = _degree_table(pattern.n, pattern.edges)
    checks = _assignment_checks(pattern, order)
    mapping = [-1] * pattern.n
    used = [False] * host_n
    state = {"count": 0, "found": None}

    def rec(k):
        if k == pattern.n:
            if count_only:
                state["count"] += 1
                return False
            state["found"] = tuple(mapping)
            return True
        u = order[k]
        candidates = (pre[u],) if u in pre else range(host_n)
        for v in candidates:
            if used[v] or host_deg[v] < pdeg[u]:
                continue
            mapping[u] = v
            ok = True
            for e in checks[k]:
                if tuple(sorted(mapping[w] for w in e)) not in host_edge_set:
                    ok = False
                    break
            if ok:
                used[v] = True
                if rec(k + 1):
                    return True
                used[v] = False
            mapping[u] = -1
        return False

    rec(0)
    return state["count"] if count_only else state["found"]


def _pattern_order(pattern: UniformHypergraph, lex_order: bool):
    if lex_order:
        return list(range(pattern.n))
    deg = _degree_table(pattern.n, pattern.edges)
    return sorted(range(pattern.n), key=lambda v: (-deg[v], v))


@dataclass(frozen=True)
class Embedding:
    """An injective map sending every pattern edge onto a host edge."""

    pattern: UniformHypergraph
    host: UniformHypergraph
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.pattern.n:
            raise HypergraphError("mapping length differs from pattern order")
        if len(set(self.mapping)) != len(self.mapping):
            raise HypergraphError("mapping is not injective")
        if any(v < 0 or v >= self.host.n for v in self.mapping):
            raise HypergraphError("mapping leaves the host vertex range")
        hs = self.host.edge_set
        for e in self.pattern.edges:
            if tuple(sorted(self.mapping[v] for v in e)) not in hs:
                raise HypergraphError(f"pattern edge {e} does not map onto a host edge")

    def image_edge(self, e: Edge) -> Edge:
        return tuple(sorted(self.mapping[v] for v in e))

    def to_json_dict(self) -> dict:
        host_text = self.host.to_text()
        return {
            "pattern": self.pattern.to_text(),
            "host_sha256": hashlib.sha256(host_text.encode()).hexdigest(),
            "mapping": list(self.mapping),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def contains(host: UniformHypergraph, pattern: UniformHypergraph, *,
             lex_order: bool = False) -> Embedding | None:
    """Find some subgraph embedding of ``pattern`` in ``host``, if any.

    With ``lex_order=True`` the pattern vertices are processed in index
    order, so the returned mapping tuple is the lexicographically first one.
    """
    if host.s != pattern.s:
        raise UniformityMismatch(f"host uniformity {host.s} != pattern {pattern.s}")
    if pattern.n > host.n:
        return None
    order = _pattern_order(pattern, lex_order)
    found = _backtrack(host.n, host.edge_set, host.degrees(), pattern, order, {},
                       count_only=False)
    return None if found is None else Embedding(pattern, host, found)


def count_embeddings(host: UniformHypergraph, pattern: UniformHypergraph) -> int:
    """Number of labelled (injective) embeddings of ``pattern`` in ``host``."""
    if host.s != pattern.s:
        raise UniformityMismatch(f"host uniformity {host.s} != pattern {pattern.s}")
    if pattern.n > host.n:
        return 0
    order = _pattern_order(pattern, lex_order=False)
    return _backtrack(host.n, host.edge_set, host.degrees(), pattern, order, {},
                      count_only=True)


def all_embeddings(host: UniformHypergraph,
                   pattern: UniformHypergraph) -> list[tuple[int, ...]]:
    """Every embedding as a mapping tuple, in lexicographic order."""
    if host.s != pattern.s:
        raise UniformityMismatch(f"host uniformity {host.s} != pattern {pattern.s}")
    if pattern.n > host.n:
        return []
    order = list(range(pattern.n))
    checks = _assignment_checks(pattern, order)
    hs = host.edge_set
    hdeg = host.degrees()
    pdeg = _degree_table(pattern.n, pattern.edges)
    mapping = [-1] * pattern.n
    used = [False] * host.n
    out = []

    def rec(k):
        if k == pattern.n:
            out.append(tuple(mapping))
            return
        for v in range(host.n):
            if used[v] or hdeg[v] < pdeg[k]:
                continue
            mapping[k] = v
            if all(tuple(sorted(mapping[w] for w in e)) in hs for e in checks[k]):
                used[v] = True
                rec(k + 1)
                used[v] = False
            mapping[k] = -1

    rec(0)
    return out


def count_embeddings_raw(host_n: int, host_edge_set, pattern: UniformHypergraph) -> int:
    """Embedding count over a raw (n, edge set) host representation."""
    if pattern.n > host_n:
        return 0
    order = _pattern_order(pattern, lex_order=False)
    return _backtrack(host_n, host_edge_set, _degree_table(host_n, host_edge_set),
                      pattern, order, {}, count_only=True)


@lru_cache(maxsize=512)
def automorphism_count(pattern: UniformHypergraph) -> int:
    """|Aut(pattern)| by brute force over vertex permutations."""
    if pattern.n > MAX_PATTERN_VERTICES:
        raise HypergraphError(
            f"pattern on {pattern.n} vertices exceeds exact automorphism "
            f"limit {MAX_PATTERN_VERTICES}"
        )
    es = pattern.edge_set
    count = 0
    for perm in permutations(range(pattern.n)):
        if all(tuple(sorted(perm[v] for v in e)) in es for e in pattern.edges):
            count += 1
    return count


def count_copies(host: UniformHypergraph, pattern: UniformHypergraph) -> int:
    """Number of unlabelled copies: embeddings / |Aut(pattern)|."""
    aut = automorphism_count(pattern)
    return count_embeddings(host, pattern) // aut


def embeds_using_edge(host_n: int, host_edge_set, pattern: UniformHypergraph,
                      edge: Edge) -> bool:
    """Does some embedding of ``pattern`` send one of its edges onto ``edge``?

    Raw-representation hook for incremental forbidden-pattern checks: when an
    edge is added to a previously pattern-free host, any new copy must use it.
    """
    if pattern.n > host_n:
        return False
    deg = _degree_table(host_n, host_edge_set)
    base_order = _pattern_order(pattern, lex_order=False)
    for f in pattern.edges:
        fset = set(f)
        order = list(f) + [u for u in base_order if u not in fset]
        for img in permutations(edge):
            pre = dict(zip(f, img))
            if _backtrack(host_n, host_edge_set, deg, pattern, order, pre,
                          count_only=False) is not None:
                return True
    return False


# ---------------------------------------------------------------------------
# cliques
# ---------------------------------------------------------------------------


def complete_subsets(n: int, s: int, edge_set, r: int) -> list[tuple[int, ...]]:
    """All r-subsets of 0..n-1 whose s-subsets all lie in ``edge_set``."""
    if r < s:
        raise HypergraphError(f"clique order {r} below uniformity {s}")
    cur = sorted(edge_set)
    for _ in range(r - s):
        cur_set = set(cur)
        nxt = []
        for t in cur:
            for v in range(t[-1] + 1, n):
                ok = True
                for i in range(len(t)):
                    if t[:i] + t[i + 1:] + (v,) not in cur_set:
                        ok = False
                        break
                if ok:
                    nxt.append(t + (v,))
        cur = nxt
    return sorted(cur)


@dataclass(frozen=True)
class CliqueFamily:
    """An ordered collection of r-sets, each spanning a clique in the host.

    The host is (r-1)-uniform; "spanning a clique" means all r of the
    (r-1)-subsets of the member are host edges.
    """

    host: UniformHypergraph
    r: int
    members: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r != self.host.s + 1:
            raise HypergraphError(
                f"clique order {self.r} does not match host uniformity {self.host.s}"
            )
        es = self.host.edge_set
        seen = set()
        for t in self.members:
            if len(t) != self.r or any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
                raise HypergraphError(f"member {t!r} is not a sorted {self.r}-set")
            if t in seen:
                raise HypergraphError(f"duplicate member {t!r}")
            seen.add(t)
            for i in range(len(t)):
                if t[:i] + t[i + 1:] not in es:
                    raise HypergraphError(f"member {t!r} does not span a clique")

    def __len__(self) -> int:
        return len(self.members)


def cliques(g: UniformHypergraph, r: int) -> CliqueFamily:
    """All r-sets spanning a complete clique in an (r-1)-uniform host."""
    if r < 3:
        raise HypergraphError(f"clique order must be >= 3, got {r}")
    if g.s != r - 1:
        raise UniformityMismatch(f"host uniformity {g.s}, expected {r - 1}")
    members = complete_subsets(g.n, g.s, g.edge_set, r)
    return CliqueFamily(g, r, tuple(members))


def edge_multiplicity(g: UniformHypergraph,
                      family: CliqueFamily) -> tuple[dict[Edge, int], int]:
    """How many family members contain each edge of g, plus the maximum."""
    if family.host != g:
        raise HypergraphError("family is not hosted in the given hypergraph")
    mult = {e: 0 for e in g.edges}
    for t in family.members:
        for i in range(len(t)):
            mult[t[:i] + t[i + 1:]] += 1
    return mult, max(mult.values(), default=0)


# ---------------------------------------------------------------------------
# blowup freeness
# ---------------------------------------------------------------------------


def materialize(pattern) -> UniformHypergraph:
    """Accept either a hypergraph or a blowup spec and return a hypergraph."""
    if isinstance(pattern, UniformHypergraph):
        return pattern
    if isinstance(pattern, BlowupSpec):
        return blowup(pattern)[0]
    raise TypeError(f"expected UniformHypergraph or BlowupSpec, got {type(pattern)!r}")


def is_blowup_free(g: UniformHypergraph,
                   spec: BlowupSpec | UniformHypergraph) -> tuple[bool, Embedding | None]:
    """True iff g contains no copy of the materialized blowup.

    When false, the witness embedding is returned alongside.
    """
    pattern = materialize(spec)
    emb = contains(g, pattern)
    return emb is None, emb


# ---------------------------------------------------------------------------
# exponent arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBound:
    label: str
    exponent: Fraction
    condition: str


@dataclass(frozen=True)
class ExponentReport:
    """Exact rational exponents bounding ex(n, clique, blowup) growth.

    ``upper`` is r - 1/(a_1*...*a_{r-1}); each lower bound carries the
    sequence shape it applies to and never exceeds the upper exponent.
    """

    r: int
    sizes: tuple[int, ...]
    upper: Fraction
    lowers: tuple[LowerBound, ...]

    def __post_init__(self):
        if not Fraction(self.r - 1) <= self.upper < Fraction(self.r):
            raise HypergraphError(f"upper exponent {self.upper} outside [r-1, r)")
        for lb in self.lowers:
            if lb.exponent > self.upper:
                raise HypergraphError(
                    f"lower bound {lb.label} = {lb.exponent} exceeds upper {self.upper}"
                )


def exponents(r: int, sizes) -> ExponentReport:
    """Exponent table for forbidding the complete r-partite (r-1)-uniform
    blowup with the given (ascending) class sizes."""
    sizes = tuple(int(a) for a in sizes)
    if r < 3:
        raise HypergraphError(f"need r >= 3, got {r}")
    if len(sizes) != r:
        raise HypergraphError(f"{len(sizes)} sizes for r = {r}")
    if any(a < 1 for a in sizes):
        raise HypergraphError("sizes must be >= 1")
    if any(sizes[i] > sizes[i + 1] for i in range(r - 1)):
        raise HypergraphError("sizes must be sorted ascending")

    upper = Fraction(r) - Fraction(1, prod(sizes[:-1]))
    lowers = [
        LowerBound(
            "general",
            Fraction(r) - Fraction(1, prod(sizes[: r - 2])),
            "any sizes; conditional on the conjectured complete-partite "
            "Turan lower bound one uniformity down",
        )
    ]
    a = sizes[-1]
    if sizes[0] == 1 and r >= 3 and a >= 2 and all(x == a for x in sizes[1:]):
        lowers.append(
            LowerBound(
                "one-then-equal",
                Fraction(r) - Fraction(r * (r - 1), a ** (r - 2)),
                f"sizes (1, {a}, ..., {a}); random host plus deletion",
            )
        )
    if a >= 2 and all(x == a for x in sizes):
        lowers.append(
            LowerBound(
                "all-equal",
                Fraction(r) - Fraction((r - 1) * (a - 1), a ** (r - 1) - 1),
                f"all sizes equal {a}; deletion-method base construction",
            )
        )
    if all(x == 2 for x in sizes):
        denom = -((2 ** (r - 1) - 1) // -(r - 1))  # ceil division
        lowers.append(
            LowerBound(
                "all-two",
                Fraction(r) - Fraction(1, denom),
                "all sizes equal 2",
            )
        )
    return ExponentReport(r, sizes, upper, tuple(lowers))
