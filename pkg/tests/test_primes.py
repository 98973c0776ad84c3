import random
from fractions import Fraction

import pytest

from resavg.primes import (
    PrimeSeq,
    bertrand_verify,
    first_primes,
    is_prime,
    iter_primes,
    lcm_sequence,
    lcm_upto,
    primes_upto,
)


def trial_division_primes(bound):
    out = []
    for n in range(2, bound + 1):
        for d in range(2, int(n**0.5) + 1):
            if n % d == 0:
                break
        else:
            out.append(n)
    return out


def is_prime_power(n):
    if n < 2:
        return False
    for p in trial_division_primes(n):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


class TestPrimesUpto:
    def test_examples(self):
        assert primes_upto(10).primes == (2, 3, 5, 7)
        assert primes_upto(2).primes == (2,)
        assert primes_upto(30).primes == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)

    def test_agrees_with_trial_division(self):
        rng = random.Random(7)
        bounds = [2, 3, 4, 100, 1000] + [rng.randint(2, 10**5) for _ in range(5)] + [10**5]
        for bound in bounds:
            assert list(primes_upto(bound).primes) == trial_division_primes(bound)

    def test_spot_check(self):
        assert primes_upto(10**4).spot_check()

    def test_rejects_tiny_bound(self):
        with pytest.raises(ValueError):
            primes_upto(1)

    def test_segmented_path_matches_miller_rabin(self):
        # force the segmented branch by sieving past the monolithic limit
        limit = 1 << 24
        bound = limit + 2000
        got = [p for p in iter_primes(bound) if p > limit]
        assert got == [n for n in range(limit + 1, bound + 1) if is_prime(n)]


class TestFirstPrimes:
    def test_small(self):
        assert first_primes(5) == (2, 3, 5, 7, 11)
        assert first_primes(0) == ()

    def test_thousandth_prime(self):
        ps = first_primes(1000)
        assert len(ps) == 1000
        assert ps[-1] == 7919


class TestBertrand:
    def test_examples(self):
        assert bertrand_verify(10) == (Fraction(5, 3), (3, 5))
        assert bertrand_verify(3) == (Fraction(3, 2), (2, 3))
        # (3, 5) stays the global maximum once 5 enters the range
        assert bertrand_verify(130) == (Fraction(5, 3), (3, 5))

    def test_direct_scan_oracle(self):
        ps = trial_division_primes(500)
        best = max(
            (Fraction(q, p) for p, q in zip(ps, ps[1:])),
        )
        ratio, pair = bertrand_verify(500)
        assert ratio == best
        assert Fraction(pair[1], pair[0]) == best

    def test_gap_bound_holds(self):
        ratio, _ = bertrand_verify(10**5)
        assert ratio <= 2


class TestLcm:
    def test_examples(self):
        assert lcm_upto(1) == 1
        assert lcm_upto(0) == 1
        assert lcm_upto(6) == 60
        assert lcm_upto(10) == 2520

    def test_divisibility_chain_and_prime_power_jumps(self):
        chain = lcm_sequence(200)
        for j in range(1, 201):
            assert chain[j] % chain[j - 1] == 0
            jumps = chain[j] // chain[j - 1] > 1
            assert jumps == is_prime_power(j)

    def test_exceeds_machine_words(self):
        # no longer representable as a signed 64-bit integer
        assert lcm_upto(43) > 2**63 - 1
        assert lcm_upto(47).bit_length() > 64


class TestIsPrime:
    def test_against_trial_division(self):
        ps = set(trial_division_primes(2000))
        for n in range(2000):
            assert is_prime(n) == (n in ps)

    def test_large_known_values(self):
        assert is_prime(2**61 - 1)
        assert not is_prime(2**67 - 1)
