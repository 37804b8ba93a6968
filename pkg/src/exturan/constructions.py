"""Certified lower-bound constructions.

Each generator emits a hypergraph together with a machine-checkable
certificate of its claimed properties; the claims are re-verified by the
counting machinery before emission, and a construction that fails its own
certificate aborts with diagnostics instead of emitting silently.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

from .canonical import canonical_key, colex_subsets
from .counting import complete_subsets, contains, is_blowup_free
from .extremal import ExtremalRecord
from .hypergraph import (
    BlowupSpec,
    HypergraphError,
    PartitionMap,
    UniformHypergraph,
    blowup,
    complete,
    complete_partite,
    induced,
    make,
    shadow,
    single_edge,
)

EXACT_APFREE_GUARD = 40


class ConstructionError(RuntimeError):
    """A construction failed one of its own certified claims."""


# ---------------------------------------------------------------------------
# progression-free sets
# ---------------------------------------------------------------------------


def _progressions(n: int, r: int):
    """All r-term arithmetic progressions inside 1..n with difference >= 1."""
    out = []
    for d in range(1, (n - 1) // (r - 1) + 1 if r > 1 else 0):
        for a in range(1, n - (r - 1) * d + 1):
            out.append(tuple(a + j * d for j in range(r)))
    return out


@dataclass(frozen=True)
class APFreeSet:
    """A subset of 1..n with no r-term arithmetic progression."""

    n: int
    r: int
    elements: tuple[int, ...]
    exact: bool  # whether the set is a maximum one

    def __post_init__(self):
        if self.r < 3:
            raise HypergraphError(f"progression length must be >= 3, got {self.r}")
        elems = set(self.elements)
        if len(elems) != len(self.elements) or self.elements != tuple(sorted(elems)):
            raise HypergraphError("elements must be sorted and duplicate free")
        if elems and (min(elems) < 1 or max(elems) > self.n):
            raise HypergraphError(f"elements outside 1..{self.n}")
        for ap in _progressions(self.n, self.r):
            if elems.issuperset(ap):
                raise HypergraphError(f"elements contain the progression {ap}")

    def __len__(self) -> int:
        return len(self.elements)


def _extends_apfree(chosen: set, x: int, aps_through) -> bool:
    for ap in aps_through[x]:
        if all(y == x or y in chosen for y in ap):
            return False
    return True


def _greedy_apfree(n: int, r: int) -> list[int]:
    aps_through = defaultdict(list)
    for ap in _progressions(n, r):
        for x in ap:
            aps_through[x].append(ap)
    chosen: set = set()
    for x in range(1, n + 1):
        if _extends_apfree(chosen, x, aps_through):
            chosen.add(x)
    return sorted(chosen)


def _exact_apfree(n: int, r: int) -> list[int]:
    """Maximum progression-free subset by branch and bound over elements."""
    aps_through = defaultdict(list)
    for ap in _progressions(n, r):
        for x in ap:
            aps_through[x].append(ap)
    best_set = _greedy_apfree(n, r)
    best = len(best_set)
    chosen: set = set()
    stack: list[int] = []

    def dfs(x: int):
        nonlocal best, best_set
        if len(chosen) + (n - x + 1) <= best:
            return
        if x > n:
            if len(chosen) > best:
                best = len(chosen)
                best_set = sorted(chosen)
            return
        if _extends_apfree(chosen, x, aps_through):
            chosen.add(x)
            dfs(x + 1)
            chosen.discard(x)
        dfs(x + 1)

    dfs(1)
    return best_set


def _behrend_elements(n: int) -> list[int]:
    """Sphere construction scaled into 1..n; no 3-term progression because a
    digitwise midpoint forces equal vectors on a strictly convex sphere."""
    best: list[int] = []
    for d in range(2, 9):
        m = 1
        while (2 * (m + 1) - 1) ** d <= 2 * n - 1:
            m += 1
        if m < 2:
            continue
        base = 2 * m - 1
        by_norm = defaultdict(list)
        for vec in product(range(m), repeat=d):
            by_norm[sum(c * c for c in vec)].append(vec)
        weights = [base ** i for i in range(d)]
        for vecs in by_norm.values():
            if len(vecs) <= len(best):
                continue
            mapped = sorted(1 + sum(c * w for c, w in zip(vec, weights)) for vec in vecs)
            if mapped[-1] <= n:
                best = mapped
    if not best:
        best = _greedy_apfree(n, 3)
    return best


def apfree_set(n: int, r: int, mode: str = "exact") -> APFreeSet:
    """Progression-free subset of 1..n.

    Modes: "exact" (maximum set, guarded to n <= 40), "greedy" (maximal),
    "behrend" (sphere construction, r = 3 only). When r > n the full range is
    progression free and returned for every mode.
    """
    if n < 1:
        raise HypergraphError(f"need n >= 1, got {n}")
    if r < 3:
        raise HypergraphError(f"progression length must be >= 3, got {r}")
    if r > n:
        return APFreeSet(n, r, tuple(range(1, n + 1)), exact=True)
    if mode == "exact":
        if n > EXACT_APFREE_GUARD:
            raise HypergraphError(
                f"exact mode is guarded to n <= {EXACT_APFREE_GUARD}, got {n}"
            )
        return APFreeSet(n, r, tuple(_exact_apfree(n, r)), exact=True)
    if mode == "greedy":
        return APFreeSet(n, r, tuple(_greedy_apfree(n, r)), exact=False)
    if mode == "behrend":
        if r != 3:
            raise HypergraphError("the sphere construction needs r = 3")
        return APFreeSet(n, r, tuple(_behrend_elements(n)), exact=False)
    raise HypergraphError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClaimResult:
    name: str
    status: str  # "pass" | "pass-sampled" | "fail"
    detail: dict

    def ok(self) -> bool:
        return self.status in ("pass", "pass-sampled")


@dataclass(frozen=True)
class ConstructionCertificate:
    construction: str
    params: dict
    claims: tuple[ClaimResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok() for c in self.claims)

    def to_json_dict(self) -> dict:
        return {
            "construction": self.construction,
            "params": self.params,
            "claims": [
                {"name": c.name, "status": c.status, "detail": c.detail}
                for c in self.claims
            ],
            "passed": self.passed,
        }

    def failures(self) -> list[ClaimResult]:
        return [c for c in self.claims if not c.ok()]


def _require(cert: ConstructionCertificate):
    if not cert.passed:
        lines = [f"{c.name}: {c.detail}" for c in cert.failures()]
        raise ConstructionError(
            f"{cert.construction} certificate failed: " + "; ".join(lines)
        )


# ---------------------------------------------------------------------------
# progression-system construction (r-partite, one edge per progression)
# ---------------------------------------------------------------------------


def _lbap_layout(n: int, r: int):
    offsets = [n * i * (i + 1) // 2 for i in range(r)]
    sizes = [(i + 1) * n for i in range(r)]
    total = (r - 1) * r * n
    sizes[-1] += total - sum(sizes)  # pad the last class to the stated budget
    return offsets, sizes, total


def lbap_hypergraph(n: int, r: int, ap: APFreeSet) -> tuple[UniformHypergraph, PartitionMap]:
    """r-partite r-uniform system with one edge per (start, difference) pair.

    Class i holds the values 1..(i+1)n; the edge for start a and difference d
    places a + i*d in class i. The result has exactly n*|S| edges, and the
    vertex budget is padded to (r-1)*r*n.
    """
    if ap.n != n or ap.r != r:
        raise HypergraphError(
            f"progression-free set built for (n={ap.n}, r={ap.r}), expected ({n}, {r})"
        )
    offsets, sizes, total = _lbap_layout(n, r)
    classes = tuple(
        tuple(range(offsets[i], offsets[i] + sizes[i])) if i < r - 1
        else tuple(range(offsets[i], total))
        for i in range(r)
    )
    edges = []
    for a in range(1, n + 1):
        for d in ap.elements:
            edges.append(tuple(offsets[i] + (a + i * d) - 1 for i in range(r)))
    return make(total, r, edges), PartitionMap(classes)


def verify_lbap_properties(h: UniformHypergraph, parts: PartitionMap, n: int, r: int,
                           ap: APFreeSet, *, tuple_budget: int = 500_000,
                           seed: int = 0) -> ConstructionCertificate:
    """Check the three structural properties of a progression system.

    (1) every (r-1)-subset of vertices lies in at most one edge; (2) for any
    choice of one vertex per class, some coordinate cannot be swapped to
    another class member while keeping an edge; (3) the vertex and edge
    counts match (r-1)*r*n and n^(r-2)*|S|. Property (2) is exhaustive while
    the class-product fits the budget and uniformly sampled above it, with
    the sampling recorded in the certificate.
    """
    claims = []

    # property 1: one edge per (r-1)-subset
    owner: dict = {}
    clash = None
    for e in h.edges:
        for i in range(len(e)):
            sub = e[:i] + e[i + 1:]
            if sub in owner and owner[sub] != e:
                clash = {"subset": list(sub), "edges": [list(owner[sub]), list(e)]}
                break
            owner[sub] = e
        if clash:
            break
    claims.append(ClaimResult(
        "one-edge-per-subset", "fail" if clash else "pass", clash or {}))
    prop1_ok = clash is None

    # property 2: no fully swappable choice of one vertex per class
    class_of = parts.class_of()
    space = 1
    for c in parts.classes:
        space *= max(len(c), 1)
    exhaustive = prop1_ok and space <= tuple_budget
    violation = None
    checked = 0
    if prop1_ok:
        if exhaustive:
            tuples = product(*parts.classes)
        else:
            rng = random.Random(seed)
            tuples = (tuple(rng.choice(c) for c in parts.classes)
                      for _ in range(tuple_budget))
        for x in tuples:
            checked += 1
            bad = True
            for i in range(r):
                sub = tuple(sorted(x[:i] + x[i + 1:]))
                e = owner.get(sub)
                if e is None:
                    bad = False
                    break
                yi = next(v for v in e if class_of[v] == i)
                if yi == x[i]:
                    bad = False
                    break
            if bad:
                violation = {"tuple": list(x)}
                break
        status = "fail" if violation else ("pass" if exhaustive else "pass-sampled")
        claims.append(ClaimResult(
            "no-local-swap", status,
            violation or {"checked": checked, "exhaustive": exhaustive}))
    else:
        # without uniqueness the fast reduction is unsound; sample raw swaps
        rng = random.Random(seed)
        es = h.edge_set
        for _ in range(tuple_budget // 10):
            checked += 1
            x = tuple(rng.choice(c) for c in parts.classes)
            ys = tuple(rng.choice(c) for c in parts.classes)
            if any(y == xi for y, xi in zip(ys, x)):
                continue
            if all(tuple(sorted(x[:i] + (ys[i],) + x[i + 1:])) in es for i in range(r)):
                violation = {"tuple": list(x), "swap": list(ys)}
                break
        claims.append(ClaimResult(
            "no-local-swap", "fail" if violation else "pass-sampled",
            violation or {"checked": checked, "exhaustive": False}))

    # property 3: vertex and edge budgets
    want_vertices = (r - 1) * r * n
    claims.append(ClaimResult(
        "vertex-count", "pass" if h.n == want_vertices else "fail",
        {"have": h.n, "want": want_vertices}))
    want_edges = n ** (r - 2) * len(ap)
    claims.append(ClaimResult(
        "edge-count", "pass" if h.m == want_edges else "fail",
        {"have": h.m, "want": want_edges}))

    return ConstructionCertificate(
        "lbap",
        {"n": n, "r": r, "elements": list(ap.elements), "exact": ap.exact},
        tuple(claims),
    )


def lbap_shadow_graph(h: UniformHypergraph) -> UniformHypergraph:
    """The (r-1)-uniform shadow of a progression system."""
    if h.s < 3:
        raise HypergraphError(f"need uniformity >= 3, got {h.s}")
    return shadow(h, h.s - 1)


def locally_linear_spec(r: int) -> BlowupSpec:
    """Forbidding this blowup (two cliques sharing an edge) makes every edge
    of an (r-1)-uniform host lie in at most one r-clique."""
    return BlowupSpec(complete(r, r - 1), (1,) * (r - 1) + (2,))


@dataclass(frozen=True)
class LbapBundle:
    ap: APFreeSet
    system: UniformHypergraph
    parts: PartitionMap
    graph: UniformHypergraph
    certificate: ConstructionCertificate


def build_lbap(n: int, r: int, mode: str = "exact", *, verify: bool = True,
               tuple_budget: int = 500_000) -> LbapBundle:
    """Full pipeline: progression-free set, r-partite system, shadow graph,
    and one certificate covering the structural and shadow claims."""
    ap = apfree_set(n, r, mode)
    h, parts = lbap_hypergraph(n, r, ap)
    g = lbap_shadow_graph(h)
    cert = verify_lbap_properties(h, parts, n, r, ap, tuple_budget=tuple_budget)
    claims = list(cert.claims)

    free, emb = is_blowup_free(g, locally_linear_spec(r))
    claims.append(ClaimResult(
        "shadow-free", "pass" if free else "fail",
        {} if free else {"witness": list(emb.mapping)}))
    clique_count = len(complete_subsets(g.n, g.s, g.edge_set, r))
    claims.append(ClaimResult(
        "shadow-clique-count", "pass" if clique_count == h.m else "fail",
        {"cliques": clique_count, "edges": h.m}))

    cert = ConstructionCertificate(cert.construction, cert.params, tuple(claims))
    if verify:
        _require(cert)
    return LbapBundle(ap, h, parts, g, cert)


# ---------------------------------------------------------------------------
# apex construction on top of an extremal base
# ---------------------------------------------------------------------------


def lb4_construct(n: int, r: int, sizes, base: ExtremalRecord, *,
                  verify: bool = True) -> tuple[UniformHypergraph, ConstructionCertificate]:
    """Apex construction: floor(n/r) vertices whose link is the complete
    (r-2)-graph on a blowup-free extremal base occupying the other
    ceil((r-1)n/r) vertices.

    The base record must hold a complete-partite-free (r-1)-uniform witness
    maximizing edges; its freeness is re-checked before use. The output
    avoids the r-class blowup with the given sizes and carries at least
    floor(n/r) * base.value cliques.
    """
    sizes = tuple(int(a) for a in sizes)
    if r < 3 or len(sizes) != r:
        raise HypergraphError(f"need r >= 3 class sizes, got {sizes} for r={r}")
    if any(sizes[i] > sizes[i + 1] for i in range(r - 1)):
        raise HypergraphError("sizes must be sorted ascending")
    na = n // r
    nb = n - na
    if nb != -((r - 1) * n) // -r:  # ceil((r-1)n/r)
        raise HypergraphError("inconsistent split")  # unreachable; identity
    base_forbidden = complete_partite(r - 1, sizes[:-1])[0]
    if base.witness.n != nb:
        raise HypergraphError(
            f"base witness has {base.witness.n} vertices, expected {nb}")
    if canonical_key(base.pattern) != canonical_key(single_edge(r - 1)):
        raise HypergraphError("base record does not count single edges")
    if canonical_key(base.forbidden) != canonical_key(base_forbidden):
        raise HypergraphError("base record forbids the wrong pattern")
    if contains(base.witness, base_forbidden) is not None:
        raise ConstructionError("base witness fails its freeness re-check")

    edges = [tuple(v + na for v in e) for e in base.witness.edges]
    b_vertices = range(na, n)
    for a in range(na):
        for rest in colex_subsets(nb, r - 2):
            edges.append((a,) + tuple(v + na for v in rest))
    h = make(n, r - 1, edges)

    claims = []
    free, emb = is_blowup_free(h, BlowupSpec(complete(r, r - 1), sizes))
    claims.append(ClaimResult(
        "forbidden-free", "pass" if free else "fail",
        {} if free else {"witness": list(emb.mapping)}))
    clique_count = len(complete_subsets(h.n, h.s, h.edge_set, r))
    bound = na * base.value
    claims.append(ClaimResult(
        "clique-count", "pass" if clique_count >= bound else "fail",
        {"cliques": clique_count, "bound": bound}))
    apex_ok = all(sum(1 for v in e if v < na) <= 1 for e in h.edges)
    restriction_ok = induced(h, list(b_vertices)) == base.witness
    claims.append(ClaimResult(
        "apex-structure", "pass" if apex_ok and restriction_ok else "fail",
        {"single_apex_per_edge": apex_ok, "base_restriction": restriction_ok}))

    cert = ConstructionCertificate(
        "lb4",
        {"n": n, "r": r, "sizes": list(sizes), "base_value": base.value},
        tuple(claims),
    )
    if verify:
        _require(cert)
    return h, cert


# ---------------------------------------------------------------------------
# probabilistic deletion
# ---------------------------------------------------------------------------


def deletion_probability(n: int, spec: BlowupSpec) -> tuple[Fraction, float]:
    """Edge probability exponent balancing expected forbidden copies against
    expected edges: p = n^(-gamma) with gamma = (v - u)/(e - 1) for a blowup
    on v vertices with e edges over a u-uniform host."""
    g, _ = blowup(spec)
    if g.m < 2:
        raise HypergraphError("deletion balancing needs a blowup with >= 2 edges")
    gamma = Fraction(g.n - g.s, g.m - 1)
    return gamma, float(n) ** (-float(gamma))


def deletion_construct(n: int, r: int, spec: BlowupSpec, p: float, seed: int, *,
                       verify: bool = True) -> tuple[UniformHypergraph, ConstructionCertificate]:
    """Sample each potential (r-1)-edge independently with probability p, then
    repeatedly remove the lexicographically first edge of the
    lexicographically first surviving copy of the forbidden blowup.

    Reproducible: identical (n, r, spec, p, seed) give identical output. The
    certificate re-verifies freeness and records the sampling statistics.
    """
    s = r - 1
    if spec.base.s != s:
        raise HypergraphError(
            f"blowup uniformity {spec.base.s} does not match host uniformity {s}")
    if not 0.0 <= p <= 1.0:
        raise HypergraphError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    sampled = [e for e in colex_subsets(n, s) if rng.random() < p]
    g = make(n, s, sampled)
    forbidden = blowup(spec)[0]

    deletions = 0
    while True:
        emb = contains(g, forbidden, lex_order=True)
        if emb is None:
            break
        victim = min(emb.image_edge(e) for e in forbidden.edges)
        g = make(n, s, [e for e in g.edges if e != victim])
        deletions += 1

    claims = []
    free, emb = is_blowup_free(g, spec)
    claims.append(ClaimResult(
        "forbidden-free", "pass" if free else "fail",
        {} if free else {"witness": list(emb.mapping)}))
    surviving_cliques = len(complete_subsets(g.n, g.s, g.edge_set, r))
    claims.append(ClaimResult(
        "statistics", "pass",
        {
            "sampled_edges": len(sampled),
            "expected_sampled_edges": p * comb(n, s),
            "deleted_edges": deletions,
            "surviving_edges": g.m,
            "surviving_cliques": surviving_cliques,
        }))

    cert = ConstructionCertificate(
        "deletion",
        {"n": n, "r": r, "sizes": list(spec.sizes),
         "base": canonical_key(spec.base), "p": p, "seed": seed},
        tuple(claims),
    )
    if verify:
        _require(cert)
    return g, cert
