import json
import random

import numpy as np
import pytest

from sumdisc.hypergraph import (APSpec, CapExceeded, Coloring, SumEdge,
                                canonical_edge_masks, color_value,
                                edge_cardinality, edge_elements,
                                enumerate_canonical_edges, translate_values)


def naive_hyperedges(n):
    """Literal definition: every (d1, l1, d2, l2) in [n]^4, every integer
    offset, intersected with [1, n]; deduplicated by set equality."""
    seen = set()
    for d1 in range(1, n + 1):
        for d2 in range(1, n + 1):
            for l1 in range(1, n + 1):
                for l2 in range(1, n + 1):
                    span = (l1 - 1) * d1 + (l2 - 1) * d2
                    base = {j1 * d1 + j2 * d2
                            for j1 in range(l1) for j2 in range(l2)}
                    for a in range(1 - span, n + 1):
                        s = frozenset(x + a for x in base if 1 <= x + a <= n)
                        if s:
                            seen.add(s)
    return seen


class TestElements:
    def test_example_sumset(self):
        assert edge_elements(SumEdge(2, 3, 3, 2)) == [0, 2, 3, 4, 5, 7]

    def test_degenerate_second_ap(self):
        for d, l in ((3, 4), (5, 1), (1, 7)):
            assert edge_elements(SumEdge(d, l, 1, 1)) == [j * d for j in range(l)]

    def test_single_point(self):
        assert edge_elements(SumEdge(1, 1, 1, 1)) == [0]

    def test_ap_spec(self):
        assert APSpec(start=3, diff=2, length=4).elements() == [3, 5, 7, 9]
        with pytest.raises(ValueError):
            APSpec(start=0, diff=0, length=1)


class TestCardinality:
    def test_collision_free_example(self):
        res = edge_cardinality(SumEdge(2, 3, 3, 2))
        assert res.value == 6 and res.collision_free

    def test_collision_example(self):
        # elements {0,2,4,6,8,10}: 6 distinct out of a 4x2 grid
        res = edge_cardinality(SumEdge(2, 4, 4, 2))
        assert res.value == 6 and not res.collision_free

    def test_trivial_first_ap(self):
        for d2, l2 in ((5, 4), (1, 9)):
            res = edge_cardinality(SumEdge(1, 1, d2, l2))
            assert res.value == l2 and res.collision_free

    def test_oracle_equivalence_random(self):
        rng = random.Random(2024)
        for _ in range(2000):
            e = SumEdge(rng.randint(1, 100), rng.randint(1, 100),
                        rng.randint(1, 100), rng.randint(1, 100))
            oracle = len({j1 * e.d1 + j2 * e.d2
                          for j1 in range(e.l1) for j2 in range(e.l2)})
            res = edge_cardinality(e)
            assert res.value == oracle
            assert res.collision_free == (oracle == e.l1 * e.l2)

    def test_hypothesis_implies_product(self):
        import math
        rng = random.Random(77)
        done = 0
        while done < 2000:
            e = SumEdge(rng.randint(1, 100), rng.randint(1, 100),
                        rng.randint(1, 10 ** 4), rng.randint(1, 100))
            if e.l1 * math.gcd(e.d1, e.d2) > e.d2:
                continue
            res = edge_cardinality(e)
            assert res.collision_free and res.value == e.l1 * e.l2
            done += 1


class TestColoring:
    def test_validation(self):
        with pytest.raises(ValueError):
            Coloring(3, [1, 0, -1])
        with pytest.raises(ValueError):
            Coloring(3, [1, 1])

    def test_extension_by_zero(self):
        chi = Coloring.alternating(10)
        assert chi(0) == 0 and chi(11) == 0 and chi(-5) == 0
        assert chi(1) == 1 and chi(2) == -1

    def test_norm(self):
        chi = Coloring.random(50, seed=1)
        assert int((chi.values.astype(int) ** 2).sum()) == 50

    def test_json_round_trip(self):
        chi = Coloring.random(17, seed=9)
        assert Coloring.from_json(chi.to_json()) == chi

    def test_edge_json_round_trip(self):
        e = SumEdge(3, 4, 5, 2)
        assert SumEdge.from_json(e.to_json()) == e
        assert json.loads(e.to_json()) == {"d1": 3, "l1": 4, "d2": 5, "l2": 2}


class TestColorValue:
    def test_all_plus_counts_survivors(self):
        chi = Coloring.all_plus(10)
        e = SumEdge(2, 3, 3, 2)  # elements {0,2,3,4,5,7}
        for a in range(-10, 12):
            expected = sum(1 for x in edge_elements(e) if 1 <= a + x <= 10)
            assert color_value(chi, e, a) == expected

    def test_alternating_adjacent_pair(self):
        chi = Coloring(4, [1, -1, 1, -1])  # chi(x) = (-1)^(x+1)
        e = SumEdge(1, 2, 1, 1)  # elements {0, 1}
        assert color_value(chi, e, 1) == 0

    def test_parity_coloring_example(self):
        # +1 on odds, -1 on evens over [10]; translate by 1 of {0,2,3,4,5,7}
        chi = Coloring.alternating(10)
        assert color_value(chi, SumEdge(2, 3, 3, 2), 1) == 0

    def test_zero_outside_support(self):
        chi = Coloring.random(12, seed=3)
        e = SumEdge(2, 3, 3, 2)
        assert color_value(chi, e, -e.span - 1) == 0
        assert color_value(chi, e, chi.n + 1) == 0

    def test_translate_values_match_pointwise(self):
        chi = Coloring.random(20, seed=5)
        e = SumEdge(3, 3, 2, 4)
        vals = translate_values(chi, e)
        for i, a in enumerate(range(-e.span, chi.n + 1)):
            assert vals[i] == color_value(chi, e, a)

    def test_translation_equals_direct_convolution(self):
        # independent direct convolution of chi with the reflected indicator
        rng = random.Random(11)
        for n in (8, 33, 64):
            chi = Coloring.random(n, seed=rng.randrange(2 ** 31))
            e = SumEdge(rng.randint(1, 5), rng.randint(1, 5),
                        rng.randint(1, 5), rng.randint(1, 5))
            els = edge_elements(e)
            for a in range(-e.span - 2, n + 3):
                conv = sum(chi(z) for z in range(a, a + e.span + 1)
                           if z - a in set(els))
                assert color_value(chi, e, a) == conv


class TestEnumeration:
    # distinct-edge counts from the literal brute-force oracle above
    FROZEN_COUNTS = {1: 1, 2: 3, 3: 7, 4: 15, 5: 31, 6: 63, 7: 119, 8: 215,
                     12: 1369, 16: 5068}

    def test_tiny_examples(self):
        assert enumerate_canonical_edges(1) == [frozenset({1})]
        assert set(enumerate_canonical_edges(2)) == {
            frozenset({1}), frozenset({2}), frozenset({1, 2})}
        assert set(enumerate_canonical_edges(3)) == {
            frozenset(s) for s in
            ({1}, {2}, {3}, {1, 2}, {2, 3}, {1, 3}, {1, 2, 3})}

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_matches_naive_definition(self, n):
        assert set(enumerate_canonical_edges(n)) == naive_hyperedges(n)

    @pytest.mark.parametrize("n", sorted(FROZEN_COUNTS))
    def test_frozen_counts(self, n):
        assert len(canonical_edge_masks(n)) == self.FROZEN_COUNTS[n]

    def test_deterministic(self):
        a = canonical_edge_masks(10)
        b = canonical_edge_masks(10)
        assert np.array_equal(a, b)

    def test_every_edge_is_a_window(self):
        # spot check: each enumerated set must be realizable as a window
        for s in enumerate_canonical_edges(5):
            assert s and min(s) >= 1 and max(s) <= 5

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_canonical_edges(65)
        with pytest.raises(CapExceeded):
            canonical_edge_masks(256)
