import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
import hypothesis.strategies as st

from exturan.counting import (
    CliqueFamily,
    Embedding,
    UniformityMismatch,
    all_embeddings,
    automorphism_count,
    cliques,
    contains,
    count_copies,
    count_embeddings,
    edge_multiplicity,
    exponents,
    is_blowup_free,
)
from exturan.hypergraph import (
    BlowupSpec,
    HypergraphError,
    blowup,
    complete,
    complete_partite,
    make,
    single_edge,
)
from oracles import brute_automorphisms, brute_contains, brute_count_copies, brute_cliques
from strategies import hypergraphs


def cycle(n):
    return make(n, 2, [[i, (i + 1) % n] for i in range(n)])


DIAMOND = BlowupSpec(complete(3, 2), (1, 1, 2))


class TestCliques:
    def test_k4_triangles(self):
        fam = cliques(complete(4, 2), 3)
        assert len(fam) == 4
        assert fam.members == tuple(combinations(range(4), 3))

    def test_k4_3_single_clique(self):
        fam = cliques(complete(4, 3), 4)
        assert fam.members == ((0, 1, 2, 3),)

    def test_uniformity_mismatch(self):
        with pytest.raises(UniformityMismatch):
            cliques(complete(4, 2), 4)

    def test_family_validation(self):
        g = complete(4, 2)
        with pytest.raises(HypergraphError, match="span"):
            CliqueFamily(make(4, 2, [[0, 1]]), 3, ((0, 1, 2),))
        with pytest.raises(HypergraphError, match="duplicate"):
            CliqueFamily(g, 3, ((0, 1, 2), (0, 1, 2)))

    @given(hypergraphs(max_n=7, min_s=2, max_s=3, min_n=3))
    def test_matches_bruteforce(self, g):
        assert list(cliques(g, g.s + 1).members) == brute_cliques(g, g.s + 1)

    @given(hypergraphs(max_n=6, min_s=2, max_s=2, min_n=3))
    def test_count_equals_unlabelled_copies(self, g):
        r = 3
        pattern = complete_partite(r - 1, [1] * r)[0]
        assert len(cliques(g, r)) == count_copies(g, pattern)


class TestContains:
    def test_diamond_in_k4(self):
        emb = contains(complete(4, 2), blowup(DIAMOND)[0])
        assert emb is not None

    def test_no_triangle_in_c5(self):
        assert contains(cycle(5), complete(3, 2)) is None

    def test_lex_order_gives_smallest_mapping(self):
        emb = contains(complete(5, 2), complete(3, 2), lex_order=True)
        assert emb.mapping == (0, 1, 2)

    def test_embedding_validates(self):
        with pytest.raises(HypergraphError):
            Embedding(complete(3, 2), cycle(5), (0, 1, 2))

    @given(hypergraphs(max_n=7, min_s=2, max_s=3, min_n=2), st.randoms())
    def test_agrees_with_bruteforce(self, host, rnd):
        k = rnd.randint(2, min(4, host.n))
        verts = sorted(rnd.sample(range(host.n), k))
        from exturan.hypergraph import induced
        pattern = induced(host, verts)
        assert (contains(host, pattern) is not None) == brute_contains(host, pattern)

    @given(hypergraphs(max_n=6, min_s=2, max_s=2, min_n=2))
    def test_random_small_patterns(self, host):
        for pattern in (complete(3, 2), cycle(4), make(3, 2, [[0, 1]])):
            assert (contains(host, pattern) is not None) == brute_contains(host, pattern)


class TestCountCopies:
    def test_triangles_in_k4(self):
        assert count_copies(complete(4, 2), complete(3, 2)) == 4

    def test_triangles_in_k5(self):
        assert count_copies(complete(5, 2), complete(3, 2)) == 10

    def test_triangles_in_triangle_blowup(self):
        g, _ = blowup(BlowupSpec(complete(3, 2), (2, 2, 2)))
        assert count_copies(g, complete(3, 2)) == 8

    def test_pattern_size_guard(self):
        with pytest.raises(HypergraphError):
            automorphism_count(complete(9, 2))

    @given(hypergraphs(max_n=6, min_s=2, max_s=3, min_n=2))
    def test_matches_bruteforce(self, host):
        for pattern in (complete(host.s + 1, host.s), single_edge(host.s)):
            assert count_copies(host, pattern) == brute_count_copies(host, pattern)
        assert count_embeddings(host, complete(host.s + 1, host.s)) == len(
            list(all_embeddings(host, complete(host.s + 1, host.s))))

    def test_automorphisms(self):
        assert automorphism_count(complete(4, 2)) == 24
        assert automorphism_count(cycle(5)) == 10
        assert automorphism_count(blowup(DIAMOND)[0]) == brute_automorphisms(blowup(DIAMOND)[0])


class TestBlowupFree:
    def test_triangle_plus_isolated_is_free(self):
        g = make(4, 2, [[0, 1], [0, 2], [1, 2]])
        free, emb = is_blowup_free(g, DIAMOND)
        assert free and emb is None

    def test_k4_not_free_with_witness(self):
        free, emb = is_blowup_free(complete(4, 2), DIAMOND)
        assert not free
        assert emb is not None  # the embedding validated at construction

    def test_witness_serializes(self):
        _, emb = is_blowup_free(complete(4, 2), DIAMOND)
        payload = json.loads(emb.to_json())
        assert set(payload) == {"pattern", "host_sha256", "mapping"}
        assert len(payload["mapping"]) == 4


class TestEdgeMultiplicity:
    def test_k4_all_triangles(self):
        g = complete(4, 2)
        mult, mx = edge_multiplicity(g, cliques(g, 3))
        assert mx == 2 and all(v == 2 for v in mult.values())

    def test_edge_disjoint_family(self):
        g = make(6, 2, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]])
        mult, mx = edge_multiplicity(g, cliques(g, 3))
        assert mx == 1

    def test_k5_multiplicity_three(self):
        g = complete(5, 2)
        mult, mx = edge_multiplicity(g, cliques(g, 3))
        assert mx == 3 and all(v == 3 for v in mult.values())  # n-2 triangles per edge

    @given(hypergraphs(max_n=7, min_s=2, max_s=3, min_n=3))
    def test_total_is_r_times_family(self, g):
        fam = cliques(g, g.s + 1)
        mult, _ = edge_multiplicity(g, fam)
        assert sum(mult.values()) == (g.s + 1) * len(fam)


class TestExponents:
    def test_one_one_two(self):
        rep = exponents(3, (1, 1, 2))
        assert rep.upper == Fraction(2)

    def test_all_two_r3(self):
        rep = exponents(3, (2, 2, 2))
        assert rep.upper == Fraction(11, 4)
        by_label = {lb.label: lb.exponent for lb in rep.lowers}
        assert by_label["all-two"] == Fraction(5, 2)

    def test_one_then_twos_r4(self):
        rep = exponents(4, (1, 2, 2, 2))
        assert rep.upper == Fraction(4) - Fraction(1, 4)
        by_label = {lb.label: lb.exponent for lb in rep.lowers}
        assert by_label["one-then-equal"] == Fraction(1)

    def test_validation(self):
        with pytest.raises(HypergraphError):
            exponents(3, (2, 1, 1))
        with pytest.raises(HypergraphError):
            exponents(2, (1, 1))

    def test_upper_dominates_all_lowers_in_range(self):
        for r in range(3, 7):
            for sizes in combinations_with_replacement_sorted(r, 5):
                rep = exponents(r, sizes)
                for lb in rep.lowers:
                    assert lb.exponent <= rep.upper


def combinations_with_replacement_sorted(r, amax):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(1, amax + 1), r)
