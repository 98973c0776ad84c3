"""Matrix-group towers: orders over finite rings, divisibility of integer
matrices, multiplicative-order exponent tables, and power selection.

Order formulas come with brute-force enumeration oracles so nothing is
taken on faith at desk scale.  The exponent tables record, for each
prime p and depth k, how many extra factors of p the image of a group
picks up when reduction mod p is refined to reduction mod p^k; the
power-selection routine walks such a table and chooses one depth per
prime so that consecutive indices land in a controlled growth window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .errors import (
    BoundExceeded,
    CoprimalityViolation,
    IdentityInput,
    InvalidPrimePower,
    TableExhausted,
)
from .primes import first_primes, is_prime, iter_primes
from .tower import IndexTower, RationalLike, as_fraction, running_product

ENUMERATION_LIMIT = 10**8


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix with exact arithmetic helpers."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and non-empty")

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_identity(self) -> bool:
        return all(
            self.entries[i][j] == (1 if i == j else 0)
            for i in range(self.n)
            for j in range(self.n)
        )

    def determinant(self) -> int:
        """Exact determinant by fraction-free elimination."""
        n = self.n
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


def _prime_power_base(q: int) -> tuple[int, int]:
    """(p, k) with q = p**k, or InvalidPrimePower."""
    if q < 2:
        raise InvalidPrimePower(f"{q} is not a prime power")
    p = q
    for candidate in range(2, math.isqrt(q) + 1):
        if q % candidate == 0:
            p = candidate
            break
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise InvalidPrimePower(f"{q} is not a prime power")
    return p, k


def gl_order(n: int, q: int) -> int:
    """|GL(n, F_q)| = (q^n - 1)(q^n - q)...(q^n - q^(n-1))."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    _prime_power_base(q)
    qn = q**n
    order = 1
    for exp in range(n):
        order *= qn - q**exp
    return order


def sl_order(n: int, q: int) -> int:
    """|SL(n, F_q)| = |GL(n, F_q)| / (q - 1)."""
    return gl_order(n, q) // (q - 1)


def _det_mod(rows: tuple[int, ...], n: int, modulus: int) -> int:
    """Determinant of a flat row-major matrix, reduced mod `modulus`.

    Cofactor-free formulas for n <= 3, full permutation expansion above
    (valid over any Z/m, unlike elimination).
    """
    if n == 1:
        return rows[0] % modulus
    if n == 2:
        return (rows[0] * rows[3] - rows[1] * rows[2]) % modulus
    if n == 3:
        a, b, c, d, e, f, g, h, i = rows
        return (a * e * i + b * f * g + c * d * h - c * e * g - b * d * i - a * f * h) % modulus
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            cursor = start
            while not seen[cursor]:
                seen[cursor] = True
                cursor = perm[cursor]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = sign
        for row_idx in range(n):
            term *= rows[row_idx * n + perm[row_idx]]
        total += term
    return total % modulus


def _enumerate_order(n: int, modulus: int, det_one: bool) -> int:
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if modulus ** (n * n) > ENUMERATION_LIMIT:
        raise ValueError(
            f"enumeration of {modulus}^{n * n} matrices exceeds the {ENUMERATION_LIMIT} budget"
        )
    count = 0
    for rows in product(range(modulus), repeat=n * n):
        det = _det_mod(rows, n, modulus)
        if det_one:
            count += det == 1
        else:
            count += math.gcd(det, modulus) == 1
    return count


def brute_force_order(n: int, p: int, det_one: bool) -> int:
    """Count n x n matrices over F_p with det = 1 (or just invertible).

    Pure enumeration; this is the oracle the closed-form orders are
    tested against.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    return _enumerate_order(n, p, det_one)


def brute_force_order_mod(n: int, p: int, k: int, det_one: bool) -> int:
    """Same enumeration over Z/p^k (det must be a unit, or exactly 1)."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1:
        raise ValueError("k must be at least 1")
    return _enumerate_order(n, p**k, det_one)


def order_mod_pk(n: int, p: int, k: int, det_one: bool) -> int:
    """Order of SL or GL over Z/p^k.

    Each refinement step mod p^k -> mod p^(k-1) has kernel a vector
    group of dimension n^2 (GL) or n^2 - 1 (SL), giving
    p^(n^2 (k-1)) |GL(n, F_p)| and p^((n^2-1)(k-1)) |SL(n, F_p)|.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1:
        raise ValueError("k must be at least 1")
    if det_one:
        return p ** ((n * n - 1) * (k - 1)) * sl_order(n, p)
    return p ** (n * n * (k - 1)) * gl_order(n, p)


def sl_prime_tower(n: int, levels: int) -> IndexTower:
    """Tower of mod-p kernels of SL(n, Z) over the first `levels` primes.

    Reduction mod p is onto SL(n, F_p), so d[j] = |SL(n, F_p_j)|, and
    distinct primes make the system prime: l is the running product.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if levels < 1:
        raise ValueError("levels must be positive")
    d = tuple(sl_order(n, p) for p in first_primes(levels))
    return IndexTower(name=f"SL({n},Z)-mod-p({levels})", d=d, l=running_product(d))


def gap_ratio_limit_check(n: int, levels: int, slack: RationalLike) -> bool:
    """Check the asymptotic bound on consecutive SL index ratios.

    Over the second half of the first `levels` primes, every ratio
    |SL(n, F_q)| / |SL(n, F_p)| for consecutive p < q must stay below
    2^(n^2 - 1) * (1 + slack).  The early primes are excluded on
    purpose: the bound is a limit statement and the first few ratios
    overshoot it.
    """
    if levels < 10:
        raise ValueError("need at least 10 primes for a meaningful ratio scan")
    bound = (Fraction(2) ** (n * n - 1)) * (1 + as_fraction(slack))
    orders = [sl_order(n, p) for p in first_primes(levels)]
    start = max(1, levels // 2)
    for j in range(start, levels):
        # pair (p_j, p_{j+1}), 1-indexed
        if orders[j] * bound.denominator > orders[j - 1] * bound.numerator:
            return False
    return True


def sl_ratio_scan(n: int, lo: int, hi: int) -> tuple[Fraction, tuple[int, int]]:
    """Max |SL(n,F_q)|/|SL(n,F_p)| over consecutive primes in [lo, hi]."""
    best = Fraction(0)
    witness = (0, 0)
    prev = None
    for p in iter_primes(hi):
        if p < lo:
            continue
        if prev is not None:
            ratio = Fraction(sl_order(n, p), sl_order(n, prev))
            if ratio > best:
                best, witness = ratio, (prev, p)
        prev = p
    return best, witness


def divisibility_matrix(gamma: IntMatrix, pmax: int) -> tuple[int, int]:
    """Cheapest mod-p kernel of SL(n, Z) missing gamma.

    Returns (p, |SL(n, F_p)|) for the smallest prime p <= pmax with
    gamma not congruent to the identity mod p; since the orders grow
    with p, that kernel also has the least index.
    """
    if gamma.determinant() != 1:
        raise ValueError("matrix must have determinant 1")
    if gamma.is_identity():
        raise IdentityInput("the divisibility function is infinite at the identity")
    n = gamma.n
    diff = [
        gamma.entries[i][j] - (1 if i == j else 0)
        for i in range(n)
        for j in range(n)
    ]
    for p in iter_primes(pmax):
        if any(e % p for e in diff):
            return p, sl_order(n, p)
    raise BoundExceeded(f"gamma reduces to the identity mod every prime <= {pmax}")


def multiplicative_order(a: int, modulus: int) -> int:
    """Order of a in (Z/modulus)*."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if math.gcd(a, modulus) != 1:
        raise CoprimalityViolation(f"{a} is not a unit mod {modulus}")
    group = _euler_phi(modulus)
    order = group
    for q in _prime_factors(group):
        while order % q == 0 and pow(a, order // q, modulus) == 1:
            order //= q
    return order


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _euler_phi(n: int) -> int:
    phi = n
    for q in _prime_factors(n):
        phi -= phi // q
    return phi


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class EllTable:
    """Exponent table of image orders over prime-power reductions.

    orders[j] is the image order at depth 1 (mod p_j); rows[j][k-1] is
    the number of extra factors of p_j gained at depth k, so the image
    order mod p_j^k is orders[j] * p_j**rows[j][k-1].  For dimension 1
    (cyclic groups of units) the depth-1 order divides p - 1 and is
    automatically prime to p.
    """

    n: int
    primes: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "rows", tuple(tuple(int(e) for e in row) for row in self.rows))
        object.__setattr__(self, "orders", tuple(int(o) for o in self.orders))
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        if not (len(self.primes) == len(self.rows) == len(self.orders)):
            raise ValueError("primes, rows, and orders must have equal length")
        if not self.primes:
            raise ValueError("table needs at least one prime")
        depth = len(self.rows[0])
        if depth < 1 or any(len(row) != depth for row in self.rows):
            raise ValueError("all rows must share one positive depth")
        step = self.n * self.n
        for j, p in enumerate(self.primes):
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if j and p <= self.primes[j - 1]:
                raise ValueError("primes must be strictly increasing")
            if not 1 <= self.orders[j] < p**step:
                raise ValueError(
                    f"order {self.orders[j]} at prime {p} outside [1, {p}^{step})"
                )
            row = self.rows[j]
            if row[0] < 0:
                raise ValueError("exponents must be non-negative")
            for k in range(1, depth):
                if row[k] < row[k - 1]:
                    raise ValueError(f"exponents must be non-decreasing (prime {p}, depth {k + 1})")
                if row[k] > row[k - 1] + step:
                    raise ValueError(
                        f"exponent step exceeds n^2 = {step} (prime {p}, depth {k + 1})"
                    )

    @property
    def depth(self) -> int:
        return len(self.rows[0])

    def __len__(self) -> int:
        return len(self.primes)

    def ell(self, j: int, k: int) -> int:
        """Exponent at prime j (1-indexed) and depth k (1-indexed)."""
        return self.rows[j - 1][k - 1]

    def index_at(self, j: int, k: int) -> int:
        """Image order mod p_j^k: orders[j] * p_j**ell(j, k)."""
        return self.orders[j - 1] * self.primes[j - 1] ** self.ell(j, k)


def mult_order_ell_table(a: int, primes: tuple[int, ...] | list[int], depth: int) -> EllTable:
    """Exponent table of the cyclic group <a> inside the unit groups.

    rows[j][k-1] is the p_j-adic valuation of the multiplicative order
    of a mod p_j^k; orders[j] is the order of a mod p_j.
    """
    if abs(a) < 2:
        raise ValueError(f"need |a| >= 2, got {a}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    ps = tuple(sorted(int(p) for p in primes))
    for p in ps:
        if math.gcd(a, p) != 1:
            raise CoprimalityViolation(f"base {a} shares a factor with prime {p}")
    rows = []
    orders = []
    for p in ps:
        row = []
        for k in range(1, depth + 1):
            row.append(_valuation(multiplicative_order(a, p**k), p))
        rows.append(tuple(row))
        orders.append(multiplicative_order(a, p))
    return EllTable(n=1, primes=ps, rows=tuple(rows), orders=tuple(orders))


def sl_exact_ell_table(n: int, count: int, depth: int) -> EllTable:
    """Exponent table of SL(n, Z) under full mod-p^k surjectivity.

    Reduction is onto SL(n, Z/p^k), so the exponent grows by exactly
    n^2 - 1 per depth: ell(j, k) = (n^2 - 1)(k - 1), with depth-1 order
    |SL(n, F_p_j)|.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    ps = first_primes(count)
    step = n * n - 1
    row = tuple(step * (k - 1) for k in range(1, depth + 1))
    return EllTable(
        n=n,
        primes=ps,
        rows=tuple(row for _ in ps),
        orders=tuple(sl_order(n, p) for p in ps),
    )


def wieferich_test(p: int, a: int = 2) -> bool:
    """True iff a**(p-1) is 1 mod p^2.

    Such primes are exactly where the exponent table of <a> stalls at
    depth 2 (the order mod p^2 equals the order mod p).
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    return pow(a, p - 1, p * p) == 1


@dataclass(frozen=True)
class PowerSelectionParams:
    """Constants steering the depth selection.

    The bounds (N past (n^2)!, C past 4, 0 < epsilon < delta < 1/2) are
    the sufficient conditions under which the selected depths provably
    give strictly increasing indices inside the power-gap window.
    """

    n: int
    N: int
    C: int
    delta: Fraction
    epsilon: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        if self.N <= math.factorial(self.n * self.n):
            raise ValueError(f"N must exceed (n^2)! = {math.factorial(self.n * self.n)}")
        if self.C <= 4:
            raise ValueError("C must exceed 4")
        if not Fraction(0) < self.delta < Fraction(1, 2):
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not Fraction(0) < self.epsilon < self.delta:
            raise ValueError(f"epsilon must lie in (0, delta), got {self.epsilon}")


def select_powers(table: EllTable, params: PowerSelectionParams, count: int) -> tuple[int, ...]:
    """Pick one depth per prime so exponents climb in controlled windows.

    Start with the least depth whose exponent clears N + C n^2; then,
    for each next prime, find the largest depth i whose exponent still
    fits under the previous exponent plus C n^2 and take i + 1.  The
    per-depth step bound of n^2 wedges the chosen exponent into
    (prev + C n^2, prev + (C+1) n^2].  Raises TableExhausted when the
    table is too shallow to continue.
    """
    if params.n != table.n:
        raise ValueError(f"parameter dimension {params.n} != table dimension {table.n}")
    if not 1 <= count <= len(table):
        raise ValueError(f"count {count} out of range 1..{len(table)}")
    n2 = params.n * params.n
    target = params.N + params.C * n2
    first_row = table.rows[0]
    k1 = None
    for k in range(1, table.depth + 1):
        if first_row[k - 1] > target:
            k1 = k
            break
    if k1 is None:
        raise TableExhausted(
            f"depth {table.depth} never clears the opening target {target} at prime {table.primes[0]}"
        )
    ks = [k1]
    for j in range(2, count + 1):
        bound = table.ell(j - 1, ks[-1]) + params.C * n2
        row = table.rows[j - 1]
        if row[0] > bound:
            raise TableExhausted(
                f"prime {table.primes[j - 1]} starts above the window bound {bound}"
            )
        largest = 0
        for k in range(1, table.depth + 1):
            if row[k - 1] <= bound:
                largest = k
            else:
                break
        if largest >= table.depth:
            raise TableExhausted(
                f"depth {table.depth} too shallow past the window bound {bound} "
                f"at prime {table.primes[j - 1]}"
            )
        ks.append(largest + 1)
    return tuple(ks)


def verify_power_windows(table: EllTable, ks: tuple[int, ...], params: PowerSelectionParams) -> bool:
    """Independent re-check of the two selection window conditions.

    Confirms ell(j, k_j) > N + C j n^2 for every j, and
    ell(j, k_j) + C n^2 < ell(j+1, k_(j+1)) <= ell(j, k_j) + (C+1) n^2
    for every consecutive pair.
    """
    n2 = params.n * params.n
    for j in range(1, len(ks) + 1):
        if table.ell(j, ks[j - 1]) <= params.N + params.C * j * n2:
            return False
    for j in range(1, len(ks)):
        here = table.ell(j, ks[j - 1])
        there = table.ell(j + 1, ks[j])
        if not (here + params.C * n2 < there <= here + (params.C + 1) * n2):
            return False
    return True


def power_gap_start_index(
    params: PowerSelectionParams,
    primes: tuple[int, ...] | None = None,
    gap_constant: int = 2,
) -> int:
    """First level from which the power-gap condition is guaranteed.

    Smallest j with (delta - eps)(N + C j n^2) - (1 + eps)(C + 2) n^2 > 1;
    when the prime sequence is supplied, also requires p_j**eps to clear
    the consecutive-prime gap constant (2 by the classical bound).
    """
    n2 = params.n * params.n
    margin = (1 + params.epsilon) * (params.C + 2) * n2
    j = 1
    while (params.delta - params.epsilon) * (params.N + params.C * j * n2) - margin <= 1:
        j += 1
    if primes is not None:
        a, b = params.epsilon.numerator, params.epsilon.denominator
        jp = None
        for idx, p in enumerate(primes, start=1):
            if p**a > gap_constant**b:
                jp = idx
                break
        if jp is None:
            raise ValueError("prime sequence too short to clear the gap constant")
        j = max(j, jp)
    return j


def power_tower(
    table: EllTable,
    ks: tuple[int, ...],
    count: int | None = None,
    det_one: bool = True,
    name: str | None = None,
) -> IndexTower:
    """Tower with d[j] = orders[j] * p_j**ell(j, k_j) for selected depths.

    The supports are distinct primes, so l is taken as the running
    product; whether the result really is a prime system is a property
    of the depth-1 orders and is computed by is_prime_system, never
    asserted here.  det_one is a label recording which family the table
    was built from; the table alone determines the indices.
    """
    if count is None:
        count = len(ks)
    if not 1 <= count <= len(ks):
        raise ValueError(f"count {count} out of range 1..{len(ks)}")
    d = tuple(table.index_at(j, ks[j - 1]) for j in range(1, count + 1))
    label = name or f"power-selected({'sl' if det_one else 'gl'},n={table.n})"
    return IndexTower(name=label, d=d, l=running_product(d))
