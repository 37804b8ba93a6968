"""Exact generalized Turan numbers at small n, with witnesses and a cache.

exact_ex maximizes the number of copies of a pattern T over all F-free
s-uniform hypergraphs on n vertices. The search enumerates hypergraphs up to
isomorphism by orderly generation: a canonical graph is extended only by
edges beyond its last colex position, the extension is kept only if it is
itself canonical, and any branch containing the forbidden pattern is pruned.
Each isomorphism class is visited exactly once, so the value is independent
of vertex labelling. Among maximizing witnesses the one with the
lexicographically smallest canonical form is kept, which makes tables
reproducible across runs and worker counts.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass
from itertools import combinations
from math import comb
from multiprocessing import get_context
from pathlib import Path

from .canonical import canonical_key, colex_subsets, is_canonical_raw
from .counting import (
    UniformityMismatch,
    automorphism_count,
    complete_subsets,
    count_copies,
    count_embeddings_raw,
    embeds_using_edge,
    is_blowup_free,
    materialize,
)
from .hypergraph import HypergraphError, UniformHypergraph, complete, make, shadow

FULL_GUARD = 36   # potential-edge budget for plain exact runs
LARGE_GUARD = 60  # reachable only with allow_large=True


class InfeasibleError(RuntimeError):
    """The instance exceeds the exact-search feasibility guard."""


class RecordError(RuntimeError):
    """An extremal record fails its own invariants."""


class CacheIntegrityError(RuntimeError):
    """A cache entry is corrupt or collides with a differing value."""


class ChainError(RuntimeError):
    """A shadow chain of exact values decreased, which should be impossible."""


@dataclass(frozen=True)
class ExtremalRecord:
    """A (possibly cached) value of ex(n, T, F) together with its witness.

    mode "exact" promises that no F-free n-vertex host exceeds ``value``;
    mode "heuristic" promises only that the witness attains it.
    """

    n: int
    s: int
    pattern: UniformHypergraph
    forbidden: UniformHypergraph
    value: int
    witness: UniformHypergraph
    mode: str
    nodes: int
    elapsed: float

    def verify(self) -> None:
        """Re-check the self-certifying part: freeness and the count."""
        if self.mode not in ("exact", "heuristic"):
            raise RecordError(f"unknown mode {self.mode!r}")
        if self.witness.n != self.n or self.witness.s != self.s:
            raise RecordError("witness shape does not match the record")
        free, _ = is_blowup_free(self.witness, self.forbidden)
        if not free:
            raise RecordError("witness contains the forbidden pattern")
        if _make_counter(self.n, self.s, self.pattern)(self.witness.edge_set) != self.value:
            raise RecordError("witness does not attain the recorded value")


# ---------------------------------------------------------------------------
# counting closures
# ---------------------------------------------------------------------------


def _make_counter(n, s, pattern):
    """Copy counter over raw edge sets, with a clique fast path."""
    t = pattern.n
    if t < s or pattern.m == 0:
        const = comb(n, t)
        return lambda edge_set: const
    if pattern.m == comb(t, s):
        return lambda edge_set: len(complete_subsets(n, s, edge_set, t))
    aut = automorphism_count(pattern)
    return lambda edge_set: count_embeddings_raw(n, edge_set, pattern) // aut


# ---------------------------------------------------------------------------
# orderly search
# ---------------------------------------------------------------------------


class _Ctx:
    def __init__(self, n, s, pattern, forbidden):
        self.n = n
        self.s = s
        self.pot = colex_subsets(n, s)
        self.M = len(self.pot)
        self.counter = _make_counter(n, s, pattern)
        self.forbidden = forbidden
        self.fb_possible = forbidden.n <= n
        self.fb_min = forbidden.m


class _Timeout(Exception):
    pass


def _explore(ctx: _Ctx, positions, edge_set, deadline):
    """Evaluate the given canonical F-free root and its whole subtree.

    Returns (best value, best positions, nodes, timed_out); ties in value are
    broken toward the lexicographically smallest position tuple.
    """
    best_val = ctx.counter(edge_set)
    best_pos = positions
    nodes = 1
    timed = False

    def rec(positions, edge_set):
        nonlocal best_val, best_pos, nodes
        start = positions[-1] + 1 if positions else 0
        for p in range(start, ctx.M):
            if deadline is not None and time.monotonic() > deadline:
                raise _Timeout
            e = ctx.pot[p]
            es2 = edge_set | {e}
            if (ctx.fb_possible and len(es2) >= ctx.fb_min
                    and embeds_using_edge(ctx.n, es2, ctx.forbidden, e)):
                continue
            if not is_canonical_raw(ctx.n, ctx.s, es2):
                continue
            nodes += 1
            pos2 = positions + (p,)
            val = ctx.counter(es2)
            if val > best_val or (val == best_val and pos2 < best_pos):
                best_val, best_pos = val, pos2
            rec(pos2, es2)

    try:
        rec(positions, frozenset(edge_set))
    except _Timeout:
        timed = True
    return best_val, best_pos, nodes, timed


def _merge(a, b):
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    return a if a[1] <= b[1] else b


_WORKER_CTX: dict = {}


def _worker_init(payload):
    n, s, pattern, forbidden = payload
    _WORKER_CTX["ctx"] = _Ctx(n, s, pattern, forbidden)


def _worker_run(positions):
    ctx = _WORKER_CTX["ctx"]
    edge_set = frozenset(ctx.pot[p] for p in positions)
    val, pos, nodes, _ = _explore(ctx, positions, edge_set, None)
    return val, pos, nodes


def _children(ctx: _Ctx, positions, edge_set):
    start = positions[-1] + 1 if positions else 0
    for p in range(start, ctx.M):
        e = ctx.pot[p]
        es2 = edge_set | {e}
        if (ctx.fb_possible and len(es2) >= ctx.fb_min
                and embeds_using_edge(ctx.n, es2, ctx.forbidden, e)):
            continue
        if not is_canonical_raw(ctx.n, ctx.s, es2):
            continue
        yield positions + (p,), es2


def _parallel_search(ctx: _Ctx, pattern, forbidden, workers):
    # expand a frontier breadth-first, evaluating shallow nodes inline, then
    # hand subtrees to the pool; the merge rule is order independent.
    target = max(16, 4 * workers)
    frontier = [((), frozenset())]
    best = (-1, None)
    nodes = 0
    while frontier and len(frontier) < target:
        nxt = []
        for positions, es in frontier:
            nodes += 1
            val = ctx.counter(es)
            best = _merge(best, (val, positions))
            nxt.extend(_children(ctx, positions, es))
        frontier = nxt
    if frontier:
        payload = (ctx.n, ctx.s, pattern, forbidden)
        mp = get_context("fork")
        with mp.Pool(workers, initializer=_worker_init, initargs=(payload,)) as pool:
            results = pool.map(_worker_run, [pos for pos, _ in frontier])
        for val, pos, sub_nodes in results:
            nodes += sub_nodes
            best = _merge(best, (val, pos))
    return best[0], best[1], nodes, False


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def exact_ex(n, pattern, forbidden, *, workers: int = 1, timeout: float | None = None,
             allow_large: bool = False, cache: "RecordCache | None" = None) -> ExtremalRecord:
    """Exact maximum number of copies of ``pattern`` in an F-free host.

    The feasibility guard limits the number of potential edges C(n, s) to
    FULL_GUARD, or LARGE_GUARD with ``allow_large``. A timeout converts the
    run into a best-so-far record marked heuristic instead of failing.
    """
    pattern = materialize(pattern)
    forbidden_g = materialize(forbidden)
    if pattern.s != forbidden_g.s:
        raise UniformityMismatch(
            f"pattern uniformity {pattern.s} != forbidden uniformity {forbidden_g.s}"
        )
    s = pattern.s
    guard = LARGE_GUARD if allow_large else FULL_GUARD
    if comb(n, s) > guard:
        raise InfeasibleError(
            f"C({n},{s}) = {comb(n, s)} potential edges exceeds the guard {guard}"
        )
    if cache is not None:
        hit = cache.get(n, pattern, forbidden_g, "exact")
        if hit is not None:
            return hit

    t0 = time.perf_counter()
    ctx = _Ctx(n, s, pattern, forbidden_g)
    if workers > 1 and timeout is None:
        val, pos, nodes, timed = _parallel_search(ctx, pattern, forbidden_g, workers)
    else:
        deadline = time.monotonic() + timeout if timeout is not None else None
        val, pos, nodes, timed = _explore(ctx, (), frozenset(), deadline)
    witness = make(n, s, [ctx.pot[p] for p in pos])
    record = ExtremalRecord(
        n=n, s=s, pattern=pattern, forbidden=forbidden_g, value=val,
        witness=witness, mode="heuristic" if timed else "exact",
        nodes=nodes, elapsed=time.perf_counter() - t0,
    )
    record.verify()
    if cache is not None and record.mode == "exact":
        cache.put(record)
    return record


def heuristic_lower(n, pattern, forbidden, seed: int = 0, budget: int = 4000,
                    cache: "RecordCache | None" = None) -> ExtremalRecord:
    """Lower-bound witness by randomized local search, reproducible per seed.

    Repeatedly grows a maximal F-free host by shuffled first-fit edge
    additions, records its pattern count, then perturbs by dropping a few
    random edges (occasionally restarting). Worst case the empty host with
    value 0 is returned.
    """
    pattern = materialize(pattern)
    forbidden_g = materialize(forbidden)
    if pattern.s != forbidden_g.s:
        raise UniformityMismatch(
            f"pattern uniformity {pattern.s} != forbidden uniformity {forbidden_g.s}"
        )
    s = pattern.s
    t0 = time.perf_counter()
    counter = _make_counter(n, s, pattern)
    fb_possible = forbidden_g.n <= n
    fb_min = forbidden_g.m
    pot = list(combinations(range(n), s))
    rng = random.Random(seed)

    edges: set = set()
    best_val = counter(frozenset())
    best_edges: tuple = ()
    steps = 0
    while steps < budget:
        order = pot[:]
        rng.shuffle(order)
        for e in order:
            if steps >= budget:
                break
            if e in edges:
                continue
            steps += 1
            es2 = frozenset(edges | {e})
            if fb_possible and len(es2) >= fb_min and embeds_using_edge(n, es2, forbidden_g, e):
                continue
            edges.add(e)
        val = counter(frozenset(edges))
        if val > best_val:
            best_val = val
            best_edges = tuple(sorted(edges))
        if steps >= budget:
            break
        if edges and rng.random() < 0.85:
            for _ in range(rng.randint(1, max(1, len(edges) // 4))):
                if not edges:
                    break
                edges.discard(rng.choice(sorted(edges)))
        else:
            edges.clear()

    witness = make(n, s, best_edges)
    record = ExtremalRecord(
        n=n, s=s, pattern=pattern, forbidden=forbidden_g, value=best_val,
        witness=witness, mode="heuristic", nodes=steps,
        elapsed=time.perf_counter() - t0,
    )
    record.verify()
    if cache is not None:
        cache.put(record)
    return record


def chain_check(n, forbidden, **kwargs) -> list[tuple[int, ExtremalRecord]]:
    """Exact values ex(n, K_r^{(s)}, shadow_s(F)) for s = 2..r, r = uniformity(F).

    The sequence is non-decreasing in s; a violation raises ChainError (it
    would mean a bug, not a mathematical possibility).
    """
    f = materialize(forbidden)
    r = f.s
    if r < 3:
        raise HypergraphError(f"chain needs uniformity >= 3, got {r}")
    out = []
    for s in range(2, r + 1):
        rec = exact_ex(n, complete(r, s), shadow(f, s), **kwargs)
        out.append((s, rec))
    for (s1, r1), (s2, r2) in zip(out, out[1:]):
        if r1.value > r2.value:
            raise ChainError(
                f"chain decreases: s={s1} gives {r1.value}, s={s2} gives {r2.value}"
            )
    return out


# ---------------------------------------------------------------------------
# persistent record cache
# ---------------------------------------------------------------------------


class RecordCache:
    """One record per file, named by key hash, re-verified on every read.

    Single-writer, multi-reader: writes go through a temp file and an atomic
    replace. Corrupt entries and key collisions with differing values raise
    CacheIntegrityError instead of being silently used.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key_of(n, pattern, forbidden, mode) -> str:
        return (f"n{n}|T:{canonical_key(pattern)}|F:{canonical_key(forbidden)}"
                f"|{mode}")

    def _path(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode()).hexdigest()[:24]
        return self.root / f"{digest}.rec"

    @staticmethod
    def _serialize(record: ExtremalRecord, key: str) -> str:
        header = {
            "key": key,
            "n": record.n,
            "s": record.s,
            "value": record.value,
            "mode": record.mode,
            "nodes": record.nodes,
            "elapsed": record.elapsed,
            "pattern": record.pattern.to_text(),
            "forbidden": record.forbidden.to_text(),
        }
        return json.dumps(header, sort_keys=True) + "\n" + record.witness.to_text()

    @staticmethod
    def _load(path: Path):
        text = path.read_text(encoding="utf-8")
        head, _, body = text.partition("\n")
        try:
            header = json.loads(head)
            witness = UniformHypergraph.from_text(body)
        except (ValueError, HypergraphError) as exc:
            raise CacheIntegrityError(f"corrupt cache entry {path}: {exc}") from None
        return header, witness

    def get(self, n, pattern, forbidden, mode) -> ExtremalRecord | None:
        key = self.key_of(n, pattern, forbidden, mode)
        path = self._path(key)
        if not path.exists():
            return None
        header, witness = self._load(path)
        if header.get("key") != key:
            raise CacheIntegrityError(
                f"cache file {path} holds key {header.get('key')!r}, expected {key!r}"
            )
        record = ExtremalRecord(
            n=header["n"], s=header["s"], pattern=pattern, forbidden=forbidden,
            value=header["value"], witness=witness, mode=header["mode"],
            nodes=header["nodes"], elapsed=header["elapsed"],
        )
        try:
            record.verify()
        except RecordError as exc:
            raise CacheIntegrityError(f"cache entry {path} fails verification: {exc}")
        return record

    def put(self, record: ExtremalRecord) -> Path:
        record.verify()
        key = self.key_of(record.n, record.pattern, record.forbidden, record.mode)
        path = self._path(key)
        if path.exists():
            header, _ = self._load(path)
            if header.get("key") != key or header.get("value") != record.value:
                raise CacheIntegrityError(
                    f"cache file {path} collides with a differing record"
                )
            return path
        tmp = path.with_suffix(".tmp")
        tmp.write_text(self._serialize(record, key), encoding="utf-8")
        os.replace(tmp, path)
        return path
