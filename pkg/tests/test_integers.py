import random
from fractions import Fraction

import pytest

from resavg.errors import ZeroInput
from resavg.integers import (
    ave_p_partial,
    ave_prime_partial,
    ave_z_partial,
    d_full,
    d_p,
    d_prime,
    divisibility_counts,
    empirical_average,
    empirical_density,
    level_set_measure,
    tower_all_subgroups,
    tower_prime_powers,
    tower_primes,
)
from resavg.primes import lcm_upto, primes_upto
from resavg.tower import ave_partial, is_nested, is_prime_system


class TestDivisibilityFunctions:
    def test_d_full_examples(self):
        assert d_full(1) == 2
        assert d_full(6) == 4
        assert d_full(60) == 7

    def test_d_prime_examples(self):
        assert d_prime(1) == 2
        assert d_prime(30) == 7
        assert d_prime(210) == 11

    def test_d_p_examples(self):
        assert d_p(3, 2) == 2
        assert d_p(4, 2) == 8
        assert d_p(18, 3) == 27

    def test_zero_rejected(self):
        for fn in (d_full, d_prime):
            with pytest.raises(ZeroInput):
                fn(0)
        with pytest.raises(ZeroInput):
            d_p(0, 2)

    def test_sign_invariance(self):
        rng = random.Random(3)
        for _ in range(50):
            m = rng.randint(1, 10**6)
            assert d_full(m) == d_full(-m)
            assert d_prime(m) == d_prime(-m)
            assert d_p(m, 3) == d_p(-m, 3)

    def test_brute_force_scans(self):
        primes = primes_upto(200).primes
        for m in range(1, 10**5 + 1):
            expected_full = next(n for n in range(2, m + 2) if m % n)
            assert d_full(m) == expected_full
            expected_prime = next(p for p in primes if m % p)
            assert d_prime(m) == expected_prime
            for p in (2, 3, 7):
                power = p
                while m % power == 0:
                    power *= p
                assert d_p(m, p) == power


class TestLevelSetMeasure:
    def test_examples(self):
        assert level_set_measure(2).measure == Fraction(1, 2)
        assert level_set_measure(4).measure == Fraction(1, 12)
        assert level_set_measure(6).measure == 0

    def test_positive_iff_prime_power(self):
        from test_primes import is_prime_power

        for n in range(2, 60):
            assert (level_set_measure(n).measure > 0) == is_prime_power(n)

    def test_telescopes_to_one(self):
        total = sum((level_set_measure(n).measure for n in range(2, 31)), Fraction(0))
        assert total == 1 - Fraction(1, lcm_upto(30))


class TestAverages:
    def test_ave_z_small(self):
        assert ave_z_partial(3) == 2
        assert ave_z_partial(5) == Fraction(8, 3)

    def test_ave_z_converges(self):
        v20 = ave_z_partial(20)
        assert abs(float(v20) - 2.787780357) < 1e-9
        assert abs(v20 - Fraction("2.787780456")) < Fraction(1, 10**6)

    def test_ave_z_equals_weighted_measures(self):
        for terms in (1, 2, 5, 13, 30):
            weighted = sum(
                (n * level_set_measure(n).measure for n in range(2, terms + 1)),
                Fraction(0),
            )
            assert ave_z_partial(terms) == weighted

    def test_ave_prime_small(self):
        assert ave_prime_partial(2) == 2
        assert ave_prime_partial(4) == Fraction(43, 15)

    def test_ave_prime_converges(self):
        assert abs(ave_prime_partial(9) - Fraction("2.920050977")) < Fraction(5, 10**7)

    def test_ave_p_examples(self):
        assert ave_p_partial(2, 10) == 10
        assert ave_p_partial(5, 3) == 12
        assert ave_p_partial(2, 0) == 0

    def test_ave_p_matches_tower_route(self):
        for p in (2, 3, 5):
            t = tower_prime_powers(p, 40)
            for terms in (0, 1, 7, 40):
                assert ave_p_partial(p, terms) == ave_partial(t, terms)


class TestEmpirical:
    def test_density_n2_exact_at_even_bound(self):
        assert empirical_density(2, 10) == 0.5

    def test_density_within_period_bound(self):
        bound = 10**4
        for n in range(2, 10):
            observed = empirical_density(n, bound)
            exact = float(level_set_measure(n).measure)
            assert abs(observed - exact) <= 2 * lcm_upto(n) / bound + 1e-9

    def test_no_mass_off_prime_powers(self):
        counts = divisibility_counts(10**4)
        assert 6 not in counts
        assert 10 not in counts
        assert 12 not in counts

    def test_average_tracks_exact_value(self):
        assert abs(empirical_average(10**4) - float(ave_z_partial(50))) < 1e-2


class TestTowers:
    def test_tower_primes(self):
        t = tower_primes(3)
        assert t.d == (2, 3, 5)
        assert t.l == (2, 6, 30)
        assert is_prime_system(t)

    def test_tower_all_subgroups(self):
        t = tower_all_subgroups(4)
        assert t.d == (2, 3, 4, 5)
        assert t.l == (2, 6, 12, 60)

    def test_tower_prime_powers(self):
        t = tower_prime_powers(2, 3)
        assert t.d == t.l == (2, 4, 8)
        assert is_nested(t)

    def test_cross_module_average_identity(self):
        # the full-subgroup tower reproduces the closed-form partial sums,
        # with the J-th tower level carrying divisibility value J + 1
        for levels in (1, 4, 10, 29):
            t = tower_all_subgroups(levels)
            assert ave_partial(t, levels) == ave_z_partial(levels + 1)

    def test_prime_tower_average_identity(self):
        for levels in (1, 3, 8):
            assert ave_partial(tower_primes(levels), levels) == ave_prime_partial(levels)
