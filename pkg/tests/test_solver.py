import math

import numpy as np
import pytest

from sumdisc.family import FamilyConfig, build_family
from sumdisc.fourier import quadrature_sum_sq, sum_sq_disc
from sumdisc.hypergraph import CapExceeded, Coloring, color_value
from sumdisc.solver import (DiscReport, FamilyMismatch, TwoNormEngine,
                            exact_discrepancy, local_search_upper,
                            random_coloring_upper, two_norm_lower)


@pytest.fixture(scope="module")
def exact_table():
    return {n: exact_discrepancy(n) for n in range(1, 17)}


class TestTwoNorm:
    def test_total_matches_direct_loop(self):
        for n, seed in ((64, 0), (576, 1)):
            fam = build_family(FamilyConfig(n=n))
            chi = Coloring.random(n, seed=seed)
            bound = two_norm_lower(chi, fam)
            direct = sum(sum_sq_disc(chi, e) for e in fam.all_edges())
            assert bound.total == direct

    def test_guaranteed_bounds_for_all_coloring_shapes(self):
        n = 576
        fam = build_family(FamilyConfig(n=n))
        colorings = [Coloring.all_plus(n), Coloring.alternating(n),
                     Coloring.block(n)]
        colorings += [Coloring.random(n, seed=s) for s in range(10)]
        for chi in colorings:
            bound = two_norm_lower(chi, fam)
            assert 90000 * bound.total >= n ** 3
            assert 1440000 * bound.witness_value ** 2 > n
            # witness value really is the color value of that translate
            got = color_value(chi, bound.witness_edge, bound.witness_offset)
            assert abs(got) == bound.witness_value
            assert bound.witness_value >= bound.derived_disc_lb - 1e-9

    def test_matches_quadrature_small_n(self):
        for n in (16, 32, 64):
            fam = build_family(FamilyConfig(n=n))
            chi = Coloring.random(n, seed=n)
            bound = two_norm_lower(chi, fam)
            maxspan = max(e.span for e in fam.all_edges())
            quad = quadrature_sum_sq(chi, list(fam.all_edges()),
                                     2 * (n + maxspan) + 1)
            assert abs(bound.total - quad) / bound.total <= 1e-6

    def test_family_mismatch(self):
        fam = build_family(FamilyConfig(n=64))
        with pytest.raises(FamilyMismatch):
            two_norm_lower(Coloring.random(32, seed=0), fam)

    def test_engine_reuse_consistent(self):
        fam = build_family(FamilyConfig(n=100))
        engine = TwoNormEngine(fam)
        chi = Coloring.random(100, seed=5)
        assert engine.evaluate(chi).total == engine.evaluate(chi).total
        assert engine.evaluate(chi).total == two_norm_lower(chi, fam).total

    def test_averaging_inequality(self):
        # max_(E,a) |chi(E_a)|^2 >= S / (2n * |family|)
        n = 576
        fam = build_family(FamilyConfig(n=n))
        for seed in range(5):
            bound = two_norm_lower(Coloring.random(n, seed=seed), fam)
            assert bound.witness_value ** 2 * 2 * n * bound.n_edges >= bound.total


class TestExact:
    # full sequence for n = 1..16, frozen from this exhaustive oracle and
    # double-checked against a no-pruning search over the literal edge
    # definition.  Note the dip at n=12: the hypergraph at n is NOT an
    # induced sub-hypergraph of the one at n+1 (windows clip differently at
    # the right boundary), so the sequence is not monotone.
    FROZEN = {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 3, 7: 3, 8: 3,
              9: 4, 10: 4, 11: 5, 12: 4, 13: 5, 14: 5, 15: 5, 16: 5}

    def test_n1(self, exact_table):
        assert exact_table[1].disc_value == 1

    def test_n2(self, exact_table):
        # +,- makes singletons 1 and {1,2} zero
        assert exact_table[2].disc_value == 1

    def test_frozen(self, exact_table):
        for n, val in self.FROZEN.items():
            assert exact_table[n].disc_value == val

    def test_values_in_sane_range(self, exact_table):
        values = [exact_table[n].disc_value for n in range(1, 17)]
        assert all(1 <= v <= n for v, n in zip(values, range(1, 17)))

    def test_known_non_monotone_step(self, exact_table):
        # regression for the verified counterexample to monotonicity
        assert exact_table[11].disc_value == 5
        assert exact_table[12].disc_value == 4

    def test_witness_attains_value(self, exact_table):
        for n in (4, 8, 12):
            rep = exact_table[n]
            chi = Coloring(n, rep.witness_coloring)
            # recompute the max imbalance of the witness over all edges
            from sumdisc.hypergraph import enumerate_canonical_edges
            worst = max(abs(sum(chi(z) for z in edge))
                        for edge in enumerate_canonical_edges(n))
            assert worst == rep.disc_value

    def test_cap(self):
        with pytest.raises(CapExceeded):
            exact_discrepancy(25)

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_matches_no_pruning_search(self, n, exact_table):
        # independent oracle: full matrix scan over every coloring,
        # no symmetry reduction, no pruning
        from sumdisc.hypergraph import enumerate_canonical_edges
        edges = enumerate_canonical_edges(n)
        m = np.zeros((len(edges), n), dtype=np.int32)
        for i, edge in enumerate(edges):
            for z in edge:
                m[i, z - 1] = 1
        best = None
        for bits in range(1 << n):
            chi = np.array([1 if bits >> j & 1 else -1 for j in range(n)],
                           dtype=np.int32)
            worst = int(np.abs(m @ chi).max())
            best = worst if best is None else min(best, worst)
        assert exact_table[n].disc_value == best


class TestUpperBounds:
    def test_random_n1(self):
        assert random_coloring_upper(1, trials=3, seed=0).disc_value == 1

    def test_single_trial_reproducible(self):
        a = random_coloring_upper(12, trials=1, seed=42)
        b = random_coloring_upper(12, trials=1, seed=42)
        assert a == b

    def test_upper_bounds_dominate_exact(self, exact_table):
        for n in range(1, 17):
            exact = exact_table[n].disc_value
            assert random_coloring_upper(n, trials=20, seed=7).disc_value >= exact
            assert local_search_upper(n, restarts=5, seed=7).disc_value >= exact

    def test_local_search_never_worse_than_start(self):
        # hill climbing only accepts improvements
        rep = local_search_upper(14, restarts=8, seed=3)
        assert rep.disc_value <= random_coloring_upper(
            14, trials=8, seed=3).disc_value + 2

    def test_report_fields(self):
        rep = random_coloring_upper(10, trials=5, seed=1)
        assert rep.method == "random" and rep.n == 10
        assert rep.trials == 5 and rep.seed == 1
        assert rep.envelope is not None and rep.envelope_ok is not None
        chi = Coloring(10, rep.witness_coloring)
        assert abs(sum(chi(z) for z in rep.witness_edge)) == rep.disc_value
        d = rep.to_json_dict()
        assert d["disc"] == rep.disc_value and d["method"] == "random"
