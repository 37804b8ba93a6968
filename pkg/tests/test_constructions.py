import pytest

from exturan.constructions import (
    APFreeSet,
    ConstructionError,
    apfree_set,
    build_lbap,
    deletion_construct,
    deletion_probability,
    lb4_construct,
    lbap_hypergraph,
    lbap_shadow_graph,
    locally_linear_spec,
    verify_lbap_properties,
)
from exturan.counting import complete_subsets, contains, is_blowup_free
from exturan.extremal import exact_ex
from exturan.hypergraph import (
    BlowupSpec,
    HypergraphError,
    blowup,
    complete,
    complete_partite,
    make,
    single_edge,
)
from oracles import apfree_max_by_masks

from fractions import Fraction
from math import comb


class TestAPFreeSets:
    def test_exact_n4(self):
        s = apfree_set(4, 3)
        assert len(s) == 3 and s.exact

    def test_exact_n8(self):
        assert len(apfree_set(8, 3)) == 4

    def test_progression_longer_than_range(self):
        s = apfree_set(3, 4)
        assert s.elements == (1, 2, 3)

    def test_greedy_is_maximal(self):
        s = apfree_set(12, 3, "greedy")
        for x in range(1, 13):
            if x in s.elements:
                continue
            with pytest.raises(HypergraphError):
                APFreeSet(12, 3, tuple(sorted(s.elements + (x,))), exact=False)

    def test_behrend_validates(self):
        s = apfree_set(60, 3, "behrend")
        assert len(s) >= 6
        with pytest.raises(HypergraphError):
            apfree_set(10, 4, "behrend")

    def test_validation_catches_progressions(self):
        with pytest.raises(HypergraphError, match="progression"):
            APFreeSet(5, 3, (1, 2, 3), exact=False)

    def test_exact_guard(self):
        with pytest.raises(HypergraphError):
            apfree_set(99, 3)

    def test_exact_matches_mask_oracle(self):
        for r in (3, 4):
            for n in (6, 9, 13, 16, 20):
                assert len(apfree_set(n, r)) == apfree_max_by_masks(n, r)


class TestLbapHypergraph:
    def test_explicit_difference_set(self):
        ap = APFreeSet(2, 3, (1,), exact=False)
        h, parts = lbap_hypergraph(2, 3, ap)
        assert parts.sizes == (2, 4, 6)
        assert h.n == 12 and h.m == 2
        # edges are (a, a+1, a+2) for a = 1, 2, placed per class
        assert h.edges == ((0, 3, 8), (1, 4, 9))

    def test_empty_difference_set(self):
        ap = APFreeSet(3, 3, (), exact=False)
        h, _ = lbap_hypergraph(3, 3, ap)
        assert h.m == 0

    def test_edge_count_is_n_times_s(self):
        ap = apfree_set(4, 3)
        h, _ = lbap_hypergraph(4, 3, ap)
        assert h.m == 4 * len(ap) == 12

    def test_wrong_parameters_rejected(self):
        ap = apfree_set(4, 3)
        with pytest.raises(HypergraphError):
            lbap_hypergraph(5, 3, ap)


class TestVerifyLbapProperties:
    def test_small_instance_passes(self):
        ap = APFreeSet(2, 3, (1,), exact=False)
        h, parts = lbap_hypergraph(2, 3, ap)
        cert = verify_lbap_properties(h, parts, 2, 3, ap)
        assert cert.passed
        assert {c.name: c.status for c in cert.claims} == {
            "one-edge-per-subset": "pass", "no-local-swap": "pass",
            "vertex-count": "pass", "edge-count": "pass"}

    def test_duplicated_pair_pinpointed(self):
        # two edges sharing two vertices violate the uniqueness property
        h = make(12, 3, [[0, 3, 8], [0, 3, 9]])
        parts = lbap_hypergraph(2, 3, APFreeSet(2, 3, (1,), exact=False))[1]
        cert = verify_lbap_properties(h, parts, 2, 3, APFreeSet(2, 3, (1,), exact=False))
        claim = {c.name: c for c in cert.claims}["one-edge-per-subset"]
        assert claim.status == "fail"
        assert claim.detail["subset"] == [0, 3]

    def test_empty_system(self):
        ap = APFreeSet(3, 3, (), exact=False)
        h, parts = lbap_hypergraph(3, 3, ap)
        cert = verify_lbap_properties(h, parts, 3, 3, ap)
        names = {c.name: c.status for c in cert.claims}
        assert names["one-edge-per-subset"] == "pass"
        assert names["no-local-swap"] == "pass"
        assert names["edge-count"] == "pass"  # 0 edges for an empty set

    def test_edge_count_mismatch_reported(self):
        ap = APFreeSet(2, 3, (1,), exact=False)
        h, parts = lbap_hypergraph(2, 3, ap)
        h_missing = make(h.n, 3, list(h.edges[:-1]))
        cert = verify_lbap_properties(h_missing, parts, 2, 3, ap)
        claim = {c.name: c for c in cert.claims}["edge-count"]
        assert claim.status == "fail" and claim.detail == {"have": 1, "want": 2}


class TestLbapShadow:
    def test_two_progressions(self):
        ap = APFreeSet(2, 3, (1,), exact=False)
        h, _ = lbap_hypergraph(2, 3, ap)
        g = lbap_shadow_graph(h)
        assert len(complete_subsets(g.n, 2, g.edge_set, 3)) == 2
        free, _ = is_blowup_free(g, locally_linear_spec(3))
        assert free

    def test_empty(self):
        h, _ = lbap_hypergraph(3, 3, APFreeSet(3, 3, (), exact=False))
        g = lbap_shadow_graph(h)
        assert g.m == 0

    def test_exact_n4_full_bundle(self):
        bundle = build_lbap(4, 3)
        assert bundle.system.m == 12
        assert len(complete_subsets(bundle.graph.n, 2, bundle.graph.edge_set, 3)) == 12
        assert bundle.certificate.passed


class TestLb4:
    def test_n6_r3_all_twos(self):
        base = exact_ex(4, single_edge(2), complete_partite(2, (2, 2))[0])
        h, cert = lb4_construct(6, 3, (2, 2, 2), base)
        assert cert.passed
        detail = {c.name: c.detail for c in cert.claims}["clique-count"]
        assert detail["bound"] == 2 * 4 and detail["cliques"] >= 8

    def test_trivial_when_head_sizes_are_one(self):
        # base forbids a single edge, so the base witness is empty
        base = exact_ex(4, single_edge(2), complete_partite(2, (1, 1))[0])
        assert base.value == 0
        h, cert = lb4_construct(6, 3, (1, 1, 2), base)
        assert cert.passed
        assert len(complete_subsets(h.n, h.s, h.edge_set, 3)) == 0

    def test_star_free_base_matching(self):
        # forbidding the 2-leaf star leaves a matching: 3 edges on 6 vertices
        base = exact_ex(6, single_edge(2), complete_partite(2, (1, 2))[0])
        assert base.value == 3
        h, cert = lb4_construct(9, 3, (1, 2, 2), base)
        assert cert.passed
        assert len(complete_subsets(h.n, h.s, h.edge_set, 3)) >= 9

    def test_structure_claims(self):
        base = exact_ex(4, single_edge(2), complete_partite(2, (2, 2))[0])
        h, cert = lb4_construct(6, 3, (2, 2, 2), base)
        na = 2
        assert all(sum(1 for v in e if v < na) <= 1 for e in h.edges)

    def test_nonfree_base_rejected(self):
        bad = exact_ex(4, single_edge(2), complete_partite(2, (2, 2))[0])
        forged = type(bad)(
            n=4, s=2, pattern=bad.pattern, forbidden=bad.forbidden,
            value=6, witness=complete(4, 2), mode="heuristic", nodes=0, elapsed=0.0)
        with pytest.raises(ConstructionError, match="freeness"):
            lb4_construct(6, 3, (2, 2, 2), forged)


class TestDeletion:
    SPEC = BlowupSpec(complete(3, 2), (1, 1, 2))

    def test_p_zero_empty(self):
        g, cert = deletion_construct(8, 3, self.SPEC, 0.0, seed=1)
        assert g.m == 0 and cert.passed

    def test_p_one_strips_to_locally_linear(self):
        g, cert = deletion_construct(10, 3, self.SPEC, 1.0, seed=0)
        free, _ = is_blowup_free(g, self.SPEC)
        assert free and cert.passed
        stats = {c.name: c.detail for c in cert.claims}["statistics"]
        assert stats["sampled_edges"] == comb(10, 2)

    def test_reproducible(self):
        a, _ = deletion_construct(9, 3, self.SPEC, 0.4, seed=5)
        b, _ = deletion_construct(9, 3, self.SPEC, 0.4, seed=5)
        assert a == b

    def test_c4_spec_balanced_probability(self):
        spec = BlowupSpec(single_edge(2), (2, 2))
        gamma, p = deletion_probability(12, spec)
        assert gamma == Fraction(2, 3)
        assert p == pytest.approx(12 ** (-2 / 3))

    def test_c4_sampling_statistics(self):
        # mean sampled edge count across seeds stays within 3 standard errors
        # of the binomial expectation; every output is C4-free
        spec = BlowupSpec(single_edge(2), (2, 2))
        n = 12
        _, p = deletion_probability(n, spec)
        runs = 50
        total = 0
        for seed in range(runs):
            g, cert = deletion_construct(n, 3, spec, p, seed=seed)
            stats = {c.name: c.detail for c in cert.claims}["statistics"]
            total += stats["sampled_edges"]
            free, _ = is_blowup_free(g, spec)
            assert free
        mean = total / runs
        mu = p * comb(n, 2)
        se = (comb(n, 2) * p * (1 - p) / runs) ** 0.5
        assert abs(mean - mu) <= 3 * se

    def test_bad_probability(self):
        with pytest.raises(HypergraphError):
            deletion_construct(8, 3, self.SPEC, 1.5, seed=0)
