"""Divisibility functions and residual averages over the integers.

Three divisibility functions are computed for a nonzero integer m:

    d_full(m)   -- least n >= 2 that does not divide m,
    d_prime(m)  -- least prime that does not divide m,
    d_p(m, p)   -- least power of a fixed prime p that does not divide m.

The "does not divide" reading is used throughout: it is the index of the
cheapest subgroup nZ missing m, and it stays well defined at m = 1 and
when p divides m, where a literal gcd-based phrasing has no solution.

The level-set measures and the exact partial averages below are tied to
these functions through the lcm chain lcm(1..n), and the empirical
counts give an independent, finite-sample route to the same numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ZeroInput
from .primes import first_primes, is_prime, lcm_sequence, lcm_upto
from .tower import IndexTower, running_product


def _abs_nonzero(m: int) -> int:
    if m == 0:
        raise ZeroInput("divisibility functions are undefined at 0")
    return abs(m)


def d_full(m: int) -> int:
    """Smallest n >= 2 with n not dividing |m|."""
    m = _abs_nonzero(m)
    n = 2
    while m % n == 0:
        n += 1
    return n


def d_prime(m: int) -> int:
    """Smallest prime not dividing |m|."""
    m = _abs_nonzero(m)
    p = 2
    while m % p == 0:
        p += 1
        while not is_prime(p):
            p += 1
    return p


def d_p(m: int, p: int) -> int:
    """p**(v+1) where v is the p-adic valuation of m.

    This is the least power of p not dividing m, hence the index of the
    cheapest subgroup p^k Z missing m.
    """
    m = _abs_nonzero(m)
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    power = p
    while m % power == 0:
        power *= p
    return power


@dataclass(frozen=True)
class ZLevelSet:
    """The set {x : d_full(x) = n} together with its Haar measure."""

    n: int
    measure: Fraction


def level_set_measure(n: int) -> ZLevelSet:
    """Measure 1/lcm(1..n-1) - 1/lcm(1..n) of the level set of n.

    Positive exactly when n is a prime power >= 2; every other n leaves
    the lcm chain unchanged and the set is empty.
    """
    if n < 2:
        raise ValueError(f"level sets start at n = 2, got {n}")
    return ZLevelSet(n=n, measure=Fraction(1, lcm_upto(n - 1)) - Fraction(1, lcm_upto(n)))


def ave_z_partial(terms: int) -> Fraction:
    """Exact partial sum of the full-system average over the integers.

    Sum over j <= terms of j * (1 - lcm(1..j-1)/lcm(1..j)) / lcm(1..j-1).
    Converges extremely fast; fifty terms pin the limit far beyond ten
    digits (reference value 2.787780456).
    """
    if terms < 0:
        raise ValueError("terms must be non-negative")
    chain = lcm_sequence(terms)
    total = Fraction(0)
    for j in range(1, terms + 1):
        prev, cur = chain[j - 1], chain[j]
        total += j * (1 - Fraction(prev, cur)) * Fraction(1, prev)
    return total


def ave_prime_partial(terms: int) -> Fraction:
    """Exact partial sum of the prime-system average over the integers.

    Sum over j <= terms of (p_j - 1) / (p_1 ... p_{j-1}); fifteen terms
    pin the limit beyond ten digits (reference value 2.920050977).
    """
    if terms < 0:
        raise ValueError("terms must be non-negative")
    total = Fraction(0)
    product = 1
    for p in first_primes(terms):
        total += Fraction(p - 1, product)
        product *= p
    return total


def ave_p_partial(p: int, terms: int) -> Fraction:
    """Partial sum J*(p-1) of the fixed-prime average.

    Every term of the series equals p - 1, so the partial sums grow
    linearly without bound; the function exists to exhibit exactly that.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if terms < 0:
        raise ValueError("terms must be non-negative")
    return Fraction(terms * (p - 1))


@lru_cache(maxsize=8)
def _divisibility_profile(bound: int) -> tuple[tuple[tuple[int, int], ...], int]:
    """Counts of d_full values over 1..bound, plus the exact value sum."""
    counts: dict[int, int] = {}
    total = 0
    for m in range(1, bound + 1):
        n = 2
        while m % n == 0:
            n += 1
        counts[n] = counts.get(n, 0) + 1
        total += n
    return tuple(sorted(counts.items())), total


def divisibility_counts(bound: int) -> dict[int, int]:
    """How often each d_full value occurs on 1..bound (single exact scan)."""
    if bound < 1:
        raise ValueError("bound must be positive")
    return dict(_divisibility_profile(bound)[0])


def empirical_density(n: int, bound: int) -> float:
    """Fraction of 1 <= m <= bound with d_full(m) = n.

    d_full is periodic with period lcm(1..n), so this converges to
    level_set_measure(n) with error at most lcm(1..n)/bound.
    """
    if n < 2:
        raise ValueError(f"level sets start at n = 2, got {n}")
    counts = divisibility_counts(bound)
    return counts.get(n, 0) / bound


def empirical_average(bound: int) -> float:
    """Mean of d_full over 1..bound (exact integer sum, one division)."""
    if bound < 1:
        raise ValueError("bound must be positive")
    _, total = _divisibility_profile(bound)
    return total / bound


def tower_all_subgroups(levels: int) -> IndexTower:
    """Tower of every proper subgroup nZ, n = 2..levels+1, by index.

    l[j] is the lcm chain, since the intersection of 2Z..(j+1)Z is
    lcm(2..j+1)Z.
    """
    if levels < 1:
        raise ValueError("levels must be positive")
    chain = lcm_sequence(levels + 1)
    return IndexTower(
        name=f"Z-all-subgroups({levels})",
        d=tuple(range(2, levels + 2)),
        l=tuple(chain[2 : levels + 2]),
    )


def tower_primes(levels: int) -> IndexTower:
    """Tower of the subgroups pZ over the first `levels` primes.

    Pairwise coprime indices make the intersections multiply, so l is
    the running product and the tower is a prime system.
    """
    if levels < 1:
        raise ValueError("levels must be positive")
    ps = first_primes(levels)
    return IndexTower(name=f"Z-primes({levels})", d=ps, l=running_product(ps))


def tower_prime_powers(p: int, levels: int) -> IndexTower:
    """Nested tower p Z > p^2 Z > ... > p^levels Z (d = l)."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if levels < 1:
        raise ValueError("levels must be positive")
    powers = tuple(p**k for k in range(1, levels + 1))
    return IndexTower(name=f"Z-prime-powers({p},{levels})", d=powers, l=powers)
