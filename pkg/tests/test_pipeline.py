import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
import hypothesis.strategies as st

from exturan.counting import (
    CliqueFamily,
    cliques,
    count_embeddings,
    edge_multiplicity,
)
from exturan.hypergraph import (
    BlowupSpec,
    HypergraphError,
    PartitionMap,
    blowup,
    complete,
    make,
)
from exturan.pipeline import (
    BlowupEmbedding,
    ThinningPlan,
    aligned_copies,
    aligned_threshold,
    auxiliary_hypergraph,
    best_aligned_partition,
    conditional_partition,
    edge_disjoint_greedy,
    find_blowup,
    lift_shadow,
    shared_edge_count,
    shared_edge_groups,
    thin_cliques,
)
from oracles import brute_cliques
from strategies import hypergraphs

TRI = complete(3, 2)


def random_host(seed, n=8, s=2, density=0.5):
    rng = random.Random(seed)
    return make(n, s, [e for e in combinations(range(n), s) if rng.random() < density])


def natural_blowup(base, sizes):
    g, parts = blowup(BlowupSpec(base, sizes))
    return g, parts


class TestLiftShadow:
    def test_k4_lifts_to_complete_3_graph(self):
        assert lift_shadow(complete(4, 2)) == complete(4, 3)

    def test_triangle_free_lifts_empty(self):
        g = make(5, 2, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]])
        assert lift_shadow(g).m == 0

    def test_iterated_to_target(self):
        assert lift_shadow(complete(5, 2), 4) == complete(5, 4)

    @given(hypergraphs(max_n=8, min_s=2, max_s=2, min_n=3), st.integers(3, 4))
    def test_clique_selection_preserved(self, g, r):
        h = lift_shadow(g)
        assert brute_cliques(g, r) == brute_cliques(h, r)


class TestEdgeDisjointGreedy:
    def test_k4_all_triangles(self):
        fam = cliques(complete(4, 2), 3)
        out = edge_disjoint_greedy(fam, 3)
        assert len(out) == 1  # any two triangles of K4 share an edge
        assert len(out) * 3 * (3 - 1) >= len(fam)

    def test_edge_disjoint_family_unchanged(self):
        g = make(6, 2, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]])
        fam = cliques(g, 3)
        out = edge_disjoint_greedy(fam, 2)
        assert out.members == fam.members

    def test_precondition_enforced(self):
        fam = cliques(complete(5, 2), 3)  # multiplicity 3
        with pytest.raises(HypergraphError):
            edge_disjoint_greedy(fam, 3)

    def test_random_instances_meet_bound(self):
        checked = 0
        for seed in range(200):
            rng = random.Random(seed)
            r = rng.choice([3, 4])
            n = rng.randint(r + 1, 10)
            b = rng.choice([2, 3])
            host = random_host(seed * 31 + 1, n=n, s=r - 1, density=rng.uniform(0.3, 0.9))
            members = list(cliques(host, r).members)
            # trim to satisfy the multiplicity precondition
            kept, counts = [], {}
            for t in members:
                subs = [t[:i] + t[i + 1:] for i in range(r)]
                if all(counts.get(sub, 0) < b - 1 for sub in subs):
                    kept.append(t)
                    for sub in subs:
                        counts[sub] = counts.get(sub, 0) + 1
            fam = CliqueFamily(host, r, tuple(kept))
            out = edge_disjoint_greedy(fam, b)
            _, mx = edge_multiplicity(host, out)
            assert mx <= 1
            assert len(out) * r * (b - 1) >= len(fam)
            checked += 1
        assert checked == 200


class TestSharedEdges:
    def test_locally_linear_has_none(self):
        g = make(6, 2, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]])
        exact, bound = shared_edge_count(g, 3, 2)
        assert exact == 0 and bound >= 0

    def test_k4(self):
        exact, bound = shared_edge_count(complete(4, 2), 3, 2)
        assert exact == 6  # one pair of triangles per edge
        assert exact <= bound

    def test_k5(self):
        exact, bound = shared_edge_count(complete(5, 2), 3, 2)
        assert exact == 30  # 10 edges, 3 triangles each
        assert exact <= bound

    def test_groups_sharing_two_edges_counted_once(self):
        g = complete(4, 3)
        fam = cliques(g, 4)
        assert shared_edge_groups(fam, 2).count == 0  # only one clique exists


class TestThinningPlan:
    def test_probability_iff_dense(self):
        rng = random.Random(0)
        for _ in range(1000):
            n_cliques = rng.randint(1, 10 ** 6)
            groups = rng.randint(1, 10 ** 6)
            a = rng.randint(2, 6)
            plan = ThinningPlan(n_cliques, groups, a, seed=0)
            assert plan.probability_valid == (n_cliques <= 2 * groups)

    def test_balance_identity_exact(self):
        plan = ThinningPlan(7, 13, 3, seed=1)
        lhs, rhs = plan.balance()
        assert lhs == rhs == Fraction(7, 2)

    def test_a2_probability(self):
        plan = ThinningPlan(4, 6, 2, seed=0)
        assert plan.retention_power == Fraction(1, 3)
        assert plan.retention_probability == pytest.approx(1 / 3)


class TestThinCliques:
    def test_edge_disjoint_family_unchanged(self):
        g = make(6, 2, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]])
        fam = cliques(g, 3)
        assert thin_cliques(fam, 2, seed=0).members == fam.members

    def test_k4_down_to_single_triangle(self):
        fam = cliques(complete(4, 2), 3)
        out = thin_cliques(fam, 2, seed=0)
        _, mx = edge_multiplicity(fam.host, out)
        assert mx <= 1 and len(out) <= 1

    def test_multiplicity_postcondition_seeded_runs(self):
        for seed in range(200):
            rng = random.Random(seed)
            a = rng.choice([2, 3])
            host = random_host(seed + 997, n=rng.randint(5, 9),
                               density=rng.uniform(0.5, 0.95))
            fam = cliques(host, 3)
            out = thin_cliques(fam, a, seed=seed)
            _, mx = edge_multiplicity(host, out)
            assert mx < a

    def test_expected_size_statistics(self):
        # locally dense instance: mean output size over 100 seeds >= 0.4 p N
        host = complete(8, 2)
        fam = cliques(host, 3)
        groups = shared_edge_groups(fam, 2).count
        plan = ThinningPlan(len(fam), groups, 2, seed=0)
        p = plan.retention_probability
        sizes = [len(thin_cliques(fam, 2, seed=s)) for s in range(100)]
        assert sum(sizes) / len(sizes) >= 0.4 * p * len(fam)


class TestAligned:
    def test_natural_partition_of_blowup(self):
        g, parts = natural_blowup(TRI, (2, 2, 2))
        copies = aligned_copies(g, TRI, parts)
        assert len(copies) == 8

    def test_no_copies(self):
        g = make(6, 2, [[0, 3]])
        parts = PartitionMap(((0, 1), (2, 3), (4, 5)))
        assert aligned_copies(g, TRI, parts) == []

    def test_class_count_mismatch(self):
        g, _ = natural_blowup(TRI, (2, 2, 2))
        with pytest.raises(HypergraphError):
            aligned_copies(g, TRI, PartitionMap((tuple(range(6)),)))

    def test_threshold_met_on_random_hosts(self):
        for seed in range(10):
            g = random_host(seed, n=9, density=0.6)
            part, aligned = best_aligned_partition(g, TRI, seed=seed, retries=200)
            assert len(aligned) >= aligned_threshold(g, TRI)

    def test_conditional_partition_guarantee(self):
        for seed in (None, 1, 2, 3):
            g = random_host(11, n=9, density=0.7)
            part = conditional_partition(g, TRI, seed)
            assert len(aligned_copies(g, TRI, part)) >= aligned_threshold(g, TRI)


class TestAuxiliary:
    def test_triangle_blowup(self):
        g, parts = natural_blowup(TRI, (2, 2, 2))
        aux = auxiliary_hypergraph(g, TRI, parts)
        assert aux.s == 2 and aux.m == 12  # 3 class pairs, 4 crossing pairs each

    def test_empty_when_no_aligned(self):
        g = make(6, 2, [[0, 3]])
        parts = PartitionMap(((0, 1), (2, 3), (4, 5)))
        assert auxiliary_hypergraph(g, TRI, parts).m == 0

    def test_single_copy_gives_one_clique(self):
        g = make(3, 2, [[0, 1], [0, 2], [1, 2]])
        parts = PartitionMap(((0,), (1,), (2,)))
        aux = auxiliary_hypergraph(g, TRI, parts)
        assert aux.m == 3  # the three projections of the one aligned copy

    def test_every_aligned_copy_spans_clique(self):
        g, parts = natural_blowup(TRI, (2, 2, 2))
        aux = auxiliary_hypergraph(g, TRI, parts)
        for copy in aligned_copies(g, TRI, parts):
            for i in range(3):
                proj = tuple(sorted(copy[:i] + copy[i + 1:]))
                assert proj in aux.edge_set


class TestFindBlowup:
    def test_recovers_triangle_blowup(self):
        g, _ = natural_blowup(TRI, (3, 3, 3))
        emb = find_blowup(g, TRI, 2, seed=0, retries=200)
        assert emb is not None and emb.sizes == (2, 2, 2)

    def test_recovers_3_uniform_blowup(self):
        g, _ = natural_blowup(complete(4, 3), (2, 2, 2, 2))
        emb = find_blowup(g, complete(4, 3), 2, seed=0, retries=200)
        assert emb is not None and emb.sizes == (2, 2, 2, 2)

    def test_none_on_free_host(self):
        g = make(6, 2, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]])
        assert find_blowup(g, TRI, 2, seed=0, retries=50) is None

    def test_embedding_revalidates(self):
        g, _ = natural_blowup(TRI, (3, 3, 3))
        emb = find_blowup(g, TRI, 2, seed=0)
        BlowupEmbedding(emb.host, emb.pattern, emb.classes)  # must not raise

    def test_trace_is_recorded(self):
        g, _ = natural_blowup(TRI, (2, 2, 2))
        trace = []
        emb = find_blowup(g, TRI, 1, seed=0, trace=trace)
        assert emb is not None
        assert trace and trace[-1]["found"]
        assert {"retry", "aligned", "threshold", "aux_edges", "found"} <= set(trace[-1])
