"""Prime generation, consecutive-gap verification, and lcm chains.

Deterministic throughout: a bytearray sieve for modest bounds, a
segmented sieve above that (workable to about 1e8), and Miller-Rabin
with a fixed witness set (exact below 3.3e24) for spot checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import compress
from typing import Iterator

_MONOLITHIC_LIMIT = 1 << 24
_SEGMENT = 1 << 20

# Sufficient witnesses for every n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality check."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _sieve_flags(n: int) -> bytearray:
    """flags[i] == 1 iff i is prime, for 0 <= i <= n."""
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = bytes(len(range(start, n + 1, p)))
    return flags


def iter_primes(bound: int) -> Iterator[int]:
    """Yield the primes <= bound in increasing order.

    Uses one flat sieve up to 2**24 and fixed-size segments beyond, so
    memory stays bounded for large scans.
    """
    if bound < 2:
        return
    if bound <= _MONOLITHIC_LIMIT:
        yield from compress(range(bound + 1), _sieve_flags(bound))
        return
    root = math.isqrt(bound)
    base = list(compress(range(root + 1), _sieve_flags(root)))
    yield from base
    lo = root + 1
    while lo <= bound:
        hi = min(lo + _SEGMENT, bound + 1)
        seg = bytearray([1]) * (hi - lo)
        for p in base:
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo :: p] = bytes(len(range(start, hi, p)))
        yield from compress(range(lo, hi), seg)
        lo = hi


@dataclass(frozen=True)
class PrimeSeq:
    """The complete increasing sequence of primes below a bound."""

    bound: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def spot_check(self, count: int = 25) -> bool:
        """Miller-Rabin every (len//count)-th element; True if all pass."""
        step = max(1, len(self.primes) // max(count, 1))
        return all(is_prime(p) for p in self.primes[::step])


def primes_upto(bound: int) -> PrimeSeq:
    """All primes <= bound, bound >= 2."""
    if bound < 2:
        raise ValueError(f"bound must be at least 2, got {bound}")
    return PrimeSeq(bound=bound, primes=tuple(iter_primes(bound)))


def first_primes(count: int) -> tuple[int, ...]:
    """The first `count` primes."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return ()
    bound = 15
    if count > 5:
        x = float(count)
        bound = int(x * (math.log(x) + math.log(math.log(x))) * 1.2) + 10
    while True:
        out = []
        for p in iter_primes(bound):
            out.append(p)
            if len(out) == count:
                return tuple(out)
        bound *= 2


def bertrand_verify(bound: int) -> tuple[Fraction, tuple[int, int]]:
    """Largest ratio between consecutive primes up to `bound`.

    Returns (max_ratio, (p, q)) where q/p attains the maximum over all
    consecutive prime pairs p < q <= bound.  The classical gap bound
    says this never exceeds 2; callers assert that rather than assume it.
    """
    if bound < 3:
        raise ValueError(f"bound must be at least 3, got {bound}")
    best_num, best_den = 0, 1
    best_pair = (0, 0)
    prev = 0
    for p in iter_primes(bound):
        if prev and p * best_den > best_num * prev:
            best_num, best_den = p, prev
            best_pair = (prev, p)
        prev = p
    return Fraction(best_num, best_den), best_pair


_LCM_CHAIN = [1, 1]


def lcm_upto(j: int) -> int:
    """lcm(1, ..., j), with lcm of the empty range defined as 1."""
    if j < 0:
        raise ValueError("j must be non-negative")
    while len(_LCM_CHAIN) <= j:
        _LCM_CHAIN.append(math.lcm(_LCM_CHAIN[-1], len(_LCM_CHAIN)))
    return _LCM_CHAIN[j]


def lcm_sequence(j: int) -> list[int]:
    """[lcm(1..0), lcm(1..1), ..., lcm(1..j)] as a fresh list."""
    lcm_upto(j)
    return _LCM_CHAIN[: j + 1]
