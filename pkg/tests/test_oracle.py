import math
from fractions import Fraction
from itertools import combinations

import pytest

import kmatch.analytic as an
import kmatch.oracle as orc
from kmatch.analytic import AsymptoticParams, PairProfile

P_GRID = [round(0.1 * i, 1) for i in range(1, 10)]


class TestEventProbability:
    def test_total_measure(self):
        assert orc.exact_event_probability(3, 0.5, lambda g: True) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_single_coordinate(self):
        for p in (0.2, 0.7):
            got = orc.exact_event_probability(4, p, lambda g: g.has_edge(0, 1))
            assert got == pytest.approx(p, abs=1e-13)

    def test_at_least_one_edge(self):
        got = orc.exact_event_probability(3, 0.5, lambda g: g.mask != 0)
        assert got == pytest.approx(0.875, abs=1e-15)

    def test_n_cap(self):
        with pytest.raises(ValueError):
            orc.exact_event_probability(7, 0.5, lambda g: True)

    def test_exact_rational_mode(self):
        got = orc.exact_event_probability(
            3, Fraction(1, 3), lambda g: g.mask != 0, exact=True
        )
        assert got == 1 - Fraction(8, 27)

    def test_float_matches_rational(self):
        f = orc.exact_prob_distance_ge_k(4, 0.3, 3, 0, 1)
        r = orc.exact_prob_distance_ge_k(4, Fraction(3, 10), 3, 0, 1, exact=True)
        assert f == pytest.approx(float(r), abs=1e-14)


class TestDistanceProbability:
    def test_k2_is_one_minus_p(self):
        assert orc.exact_prob_distance_ge_k(3, 0.5, 2, 0, 1) == pytest.approx(0.5)

    def test_k3_reference(self):
        got = orc.exact_prob_distance_ge_k(3, 0.5, 3, 0, 1)
        assert got == pytest.approx(0.375, abs=1e-15)

    def test_k3_factorizes(self):
        # at k=3 the blocking structures (the edge and the length-2 paths)
        # are edge-disjoint, so the probability is exactly the product
        for n in (3, 4, 5):
            for p in (0.2, 0.6, 0.9):
                got = orc.exact_prob_distance_ge_k(n, p, 3, 0, 1)
                want = (1 - p) * (1 - p * p) ** (n - 2)
                assert got == pytest.approx(want, abs=1e-12)

    def test_k2_grid_is_one_minus_p(self):
        for n in range(2, 6):
            for p in P_GRID:
                for u in range(n):
                    for v in range(u + 1, n):
                        got = orc.exact_prob_distance_ge_k(n, p, 2, u, v)
                        assert abs(got - (1 - p)) < 1e-12


class TestKMatchingProbability:
    def test_single_edge(self):
        for p in (0.25, 0.8):
            assert orc.exact_prob_k_matching(5, p, 3, [(0, 1)]) == pytest.approx(
                p, abs=1e-13
            )

    def test_k2_closed_form(self):
        got = orc.exact_prob_k_matching(4, 0.5, 2, [(0, 1), (2, 3)])
        assert got == pytest.approx(0.015625, abs=1e-15)

    def test_k2_closed_form_grid(self):
        for p in P_GRID:
            got = orc.exact_prob_k_matching(4, p, 2, [(0, 1), (2, 3)])
            assert abs(got - p**2 * (1 - p) ** 4) < 1e-12

    def test_overlapping_matching_rejected(self):
        with pytest.raises(ValueError):
            orc.exact_prob_k_matching(5, 0.5, 2, [(0, 1), (1, 2)])

    def test_unnormalized_input_accepted(self):
        a = orc.exact_prob_k_matching(5, 0.4, 2, [(1, 0), (3, 2)])
        b = orc.exact_prob_k_matching(5, 0.4, 2, [(0, 1), (2, 3)])
        assert a == b


class TestJansonSandwich:
    def test_vertex_pairs_full_grid(self):
        tol = 1e-12
        for n in range(2, 6):
            for k in (2, 3):
                for p in P_GRID:
                    params = AsymptoticParams.from_np(n, p, k)
                    j = an.janson_vertex_pair(params)
                    for u in range(n):
                        for v in range(u + 1, n):
                            exact = orc.exact_prob_distance_ge_k(n, p, k, u, v)
                            assert j.u - tol <= exact <= j.u_exp_delta + tol, (
                                n,
                                k,
                                p,
                                u,
                                v,
                            )

    def test_matchings_m2(self):
        tol = 1e-12
        for n in (5, 6):
            for k in (2, 3):
                for p in P_GRID:
                    params = AsymptoticParams.from_np(n, p, k)
                    j = an.janson_matching(params, 2)
                    exact = orc.exact_prob_k_matching(n, p, k, [(0, 1), (2, 3)])
                    conditional = exact / p**2
                    assert j.u - tol <= conditional <= j.u_exp_delta + tol, (n, k, p)


class TestExpectedXm:
    def test_triangle(self):
        assert orc.exact_expected_Xm(3, 0.5, 2, 1) == pytest.approx(1.5, abs=1e-15)

    def test_m0(self):
        assert orc.exact_expected_Xm(4, 0.7, 2, 0) == 1.0

    def test_k4_perfect_matchings(self):
        assert orc.exact_expected_Xm(4, 0.5, 2, 2) == pytest.approx(
            0.046875, abs=1e-15
        )

    def test_linearity_against_per_graph_count(self):
        # E[X_m] equals the graph-average of the per-graph k-matching count
        n, p, k, m = 4, 0.3, 2, 2
        matchings = orc.enumerate_matchings(n, m)

        def count_in_graph(g):
            total = 0
            for mm in matchings:
                if all(g.has_edge(u, v) for u, v in mm) and all(
                    g.distance_at_least(
                        (1 << a[0]) | (1 << a[1]), (1 << b[0]) | (1 << b[1]), k
                    )
                    for a, b in combinations(mm, 2)
                ):
                    total += 1
            return total

        slots = len(orc.pair_slots(n))
        avg = math.fsum(
            count_in_graph(orc.MaskGraph(n, mask))
            * p ** mask.bit_count()
            * (1 - p) ** (slots - mask.bit_count())
            for mask in range(1 << slots)
        )
        assert orc.exact_expected_Xm(n, p, k, m) == pytest.approx(avg, abs=1e-13)

    def test_prefactor_matches_formula_with_exact_probability(self):
        # replace the probability main term by the oracle value; the
        # combinatorial prefactor C(n,2m) (2m)!/(2^m m!) must then match
        # E[X_m] exactly (all size-m matchings are equivalent by symmetry)
        for n, m in ((4, 2), (5, 2), (6, 3)):
            k, p = 2, 0.35
            members = [(2 * i, 2 * i + 1) for i in range(m)]
            prob = orc.exact_prob_k_matching(n, p, k, members)
            prefactor = (
                math.comb(n, 2 * m) * math.factorial(2 * m) // (2**m * math.factorial(m))
            )
            assert orc.exact_expected_Xm(n, p, k, m) == pytest.approx(
                prefactor * prob, rel=1e-12
            )


class TestPairProfileTable:
    def test_n4_m1_reference(self):
        table = orc.exact_pair_profile_table(4, 1)
        assert table == {
            PairProfile(0, 0, 1): 6,
            PairProfile(1, 0, 0): 6,
            PairProfile(0, 1, 0): 24,
        }

    def test_n2_m1(self):
        assert orc.exact_pair_profile_table(2, 1) == {PairProfile(0, 0, 1): 1}

    def test_n5_m1_reference(self):
        table = orc.exact_pair_profile_table(5, 1)
        assert table[PairProfile(0, 0, 1)] == 10
        assert table[PairProfile(0, 1, 0)] == 60
        assert table[PairProfile(1, 0, 0)] == 30

    def test_matches_closed_form_everywhere(self):
        for n in range(2, 7):
            for m in (1, 2):
                if 2 * m > n:
                    continue
                table = orc.exact_pair_profile_table(n, m)
                for profile, count in table.items():
                    assert count == an.pair_count_exact(n, profile), (n, m, profile)
                # and the closed form is zero-consistent: feasible profiles
                # absent from the table really have count 0
                for r in range(m + 1):
                    for c_v in range(m - r + 1):
                        profile = PairProfile(r, c_v, m - r - c_v)
                        if 4 * r + 3 * c_v + 2 * profile.c_e <= n:
                            assert table.get(profile, 0) == an.pair_count_exact(
                                n, profile
                            ), (n, m, profile)


class TestUmkDistribution:
    def test_two_vertices(self):
        assert orc.exact_umk_distribution(2, 0.5, 2) == {0: 0.5, 1: 0.5}

    def test_three_vertices(self):
        got = orc.exact_umk_distribution(3, 0.5, 2)
        assert got[0] == pytest.approx(1 / 8)
        assert got[1] == pytest.approx(7 / 8)

    def test_distributions_sum_to_one(self):
        for n in (2, 3, 4):
            for p in (0.2, 0.6):
                got = orc.exact_umk_distribution(n, p, 2)
                assert math.fsum(got.values()) == pytest.approx(1.0, abs=1e-12)

    def test_k_larger_shifts_down(self):
        loose = orc.exact_umk_distribution(5, 0.5, 2)
        strict = orc.exact_umk_distribution(5, 0.5, 3)
        mean_loose = sum(s * q for s, q in loose.items())
        mean_strict = sum(s * q for s, q in strict.items())
        assert mean_strict <= mean_loose


class TestMonteCarloConsistency:
    def test_empirical_frequency_matches_oracle(self):
        # sampled graphs agree with enumeration within 3 binomial sigmas
        import kmatch as km

        n, p, k, trials = 5, 0.3, 2, 800
        target = orc.exact_prob_distance_ge_k(n, p, k, 0, 1)
        hits = 0
        for seed in range(trials):
            g = km.sample_gnp(km.GnpParams(n, p, seed))
            hits += km.vertex_distance(g, 0, 1) >= k
        sigma = math.sqrt(target * (1 - target) / trials)
        assert abs(hits / trials - target) <= 3 * sigma
