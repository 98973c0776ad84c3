"""Shared deterministic generators for the property suites."""

from __future__ import annotations

import math
import random

from resavg.tower import IndexTower, running_product


def divisors(n: int) -> list[int]:
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def random_consistent_tower(rng: random.Random, max_levels: int = 8) -> IndexTower:
    """A tower whose decomposition is integral at every level.

    Built level by level: pick s_j, extend l multiplicatively, pick r_j
    among the divisors of l[j-1], and set d_j = r_j s_j; retried until
    d stays non-decreasing.  Levels with s_j = 1 are allowed on purpose.
    """
    while True:
        levels = rng.randint(1, max_levels)
        d: list[int] = []
        l: list[int] = []
        l_prev = 1
        d_prev = 2
        ok = True
        for _ in range(levels):
            for _attempt in range(40):
                s = rng.randint(1, 6)
                r = rng.choice(divisors(l_prev))
                dj = r * s
                if dj >= max(2, d_prev):
                    break
            else:
                ok = False
                break
            l_prev *= s
            d.append(dj)
            l.append(l_prev)
            d_prev = dj
        if ok and d:
            return IndexTower("random-consistent", tuple(d), tuple(l))


def random_prime_tower(rng: random.Random, max_levels: int = 8) -> IndexTower:
    levels = rng.randint(1, max_levels)
    s = sorted(rng.randint(2, 9) for _ in range(levels))
    return IndexTower("random-prime", tuple(s), running_product(s))


def random_nested_tower(rng: random.Random, max_levels: int = 8) -> IndexTower:
    levels = rng.randint(1, max_levels)
    s = [rng.randint(2, 5) for _ in range(levels)]
    powers = running_product(s)
    return IndexTower("random-nested", powers, powers)


def random_moduli_tower(rng: random.Random, max_levels: int = 8) -> IndexTower:
    """Genuine intersection-lattice data: subgroups mZ for distinct moduli."""
    count = rng.randint(1, max_levels)
    moduli = sorted(rng.sample(range(2, 61), count))
    l = []
    acc = 1
    for m in moduli:
        acc = math.lcm(acc, m)
        l.append(acc)
    return IndexTower("random-moduli", tuple(moduli), tuple(l))
