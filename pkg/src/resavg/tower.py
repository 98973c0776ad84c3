"""Index towers: exact lattice data for residual systems.

A residual system on a group is summarized by two integer sequences,

    d[j] = index of the j-th subgroup,
    l[j] = index of the intersection of the first j subgroups,

with the convention l[0] = 1 (the empty intersection is the whole
group).  Everything this module computes -- level coefficients (r, s, t),
measure terms, partial averages, growth ratios, gap conditions -- is
derived from those two sequences in exact rational arithmetic.  That
keeps the core group-agnostic: the integer, matrix-group and tree-group
constructions elsewhere in the package all reduce to index sequences.

Levels are 1-indexed in every public signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DegenerateLevel, InconsistentTower, InsufficientData

RationalLike = Union[int, str, float, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce a parameter to an exact Fraction.

    Floats go through their shortest decimal repr, so as_fraction(0.4)
    is 2/5 rather than the 53-bit binary artifact.  Strings accept both
    "2/5" and "0.4".
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class IndexTower:
    """Immutable index data of a residual system.

    Construction validates shape only (equal lengths, entries positive,
    d non-decreasing, d >= 2).  The divisibility relations that a real
    subgroup lattice would force are checked lazily by decompose(),
    which raises InconsistentTower on data that cannot arise from one;
    this allows deliberately broken towers to be built and diagnosed.
    """

    name: str
    d: tuple[int, ...]
    l: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))
        if len(self.d) != len(self.l):
            raise ValueError(
                f"d and l must have equal length, got {len(self.d)} and {len(self.l)}"
            )
        if not self.d:
            raise ValueError("a tower needs at least one level")
        for j, dj in enumerate(self.d, start=1):
            if dj < 2:
                raise ValueError(f"d[{j}] = {dj}: subgroup indices must be at least 2")
        for j, lj in enumerate(self.l, start=1):
            if lj < 1:
                raise ValueError(f"l[{j}] = {lj}: intersection indices must be positive")
        for j in range(1, len(self.d)):
            if self.d[j] < self.d[j - 1]:
                raise ValueError(
                    f"d must be non-decreasing: d[{j}] = {self.d[j - 1]} > d[{j + 1}] = {self.d[j]}"
                )

    def __len__(self) -> int:
        return len(self.d)

    def d_at(self, j: int) -> int:
        """d[j], 1-indexed."""
        return self.d[j - 1]

    def l_at(self, j: int) -> int:
        """l[j], 1-indexed, with l[0] = 1."""
        return 1 if j == 0 else self.l[j - 1]


@dataclass(frozen=True)
class LevelDecomposition:
    """Coefficients of the lattice diamond at one level.

    r = [G : G_j], s = [L_{j-1} : L_j], t = [G_j : L_{j-1}], where G_j
    is the join of the j-th subgroup with the previous intersection.
    They satisfy r*s = d[j] and r*s*t = l[j].
    """

    r: int
    s: int
    t: int


class GrowthClass(Enum):
    SUB_QUADRATIC = "SubQuadratic"
    SUPER_QUADRATIC = "SuperQuadratic"
    INDETERMINATE = "Indeterminate"


def _check_level(tower: IndexTower, j: int) -> None:
    if not 1 <= j <= len(tower):
        raise ValueError(f"level {j} out of range 1..{len(tower)}")


def _check_prefix(tower: IndexTower, j: int) -> None:
    if not 0 <= j <= len(tower):
        raise ValueError(f"prefix length {j} out of range 0..{len(tower)}")


def decompose(tower: IndexTower, j: int) -> LevelDecomposition:
    """Exact (r, s, t) at level j.

    s = l[j]/l[j-1], t = l[j]/d[j], r = d[j]*l[j-1]/l[j].  Raises
    InconsistentTower when any of the three quotients is non-integral,
    which is the signal that (d, l) cannot come from a subgroup lattice.
    """
    _check_level(tower, j)
    dj = tower.d_at(j)
    lj = tower.l_at(j)
    lprev = tower.l_at(j - 1)
    if lj % lprev:
        raise InconsistentTower(
            f"{tower.name}: l[{j - 1}] = {lprev} does not divide l[{j}] = {lj}"
        )
    if lj % dj:
        raise InconsistentTower(
            f"{tower.name}: d[{j}] = {dj} does not divide l[{j}] = {lj}"
        )
    if (dj * lprev) % lj:
        raise InconsistentTower(
            f"{tower.name}: d[{j}]*l[{j - 1}] = {dj * lprev} is not a multiple of l[{j}] = {lj}"
        )
    return LevelDecomposition(r=dj * lprev // lj, s=lj // lprev, t=lj // dj)


def measure_term(tower: IndexTower, j: int) -> Fraction:
    """Haar measure of the level-j coset shell, (s-1)/(r*s*t).

    Equals 1/l[j-1] - 1/l[j] exactly; the telescoping form is kept as an
    independent test oracle rather than used here.
    """
    dec = decompose(tower, j)
    return Fraction(dec.s - 1, dec.r * dec.s * dec.t)


def ave_terms(tower: IndexTower, terms: int | None = None) -> list[Fraction]:
    """The series terms (s_j - 1)/t_j of the residual average."""
    count = len(tower) if terms is None else terms
    _check_prefix(tower, count)
    out = []
    for j in range(1, count + 1):
        dec = decompose(tower, j)
        out.append(Fraction(dec.s - 1, dec.t))
    return out


def ave_partial(tower: IndexTower, terms: int) -> Fraction:
    """Partial residual average: sum of d[j] * measure_term over j <= terms."""
    return sum(ave_terms(tower, terms), Fraction(0))


def ave_partial_product_form(tower: IndexTower, terms: int) -> Fraction:
    """Partial residual average via the product-form series.

    Sums r_j (s_j - 1) / (s_1 ... s_{j-1}).  Kept as a separate code
    path from ave_partial so the two published series can be compared on
    any tower; with coefficients derived from (d, l) they agree term by
    term, which the test suite checks rather than assumes.
    """
    _check_prefix(tower, terms)
    total = Fraction(0)
    s_product = 1
    for j in range(1, terms + 1):
        dec = decompose(tower, j)
        total += Fraction(dec.r * (dec.s - 1), s_product)
        s_product *= dec.s
    return total


def measure_telescope(tower: IndexTower, terms: int) -> Fraction:
    """Sum of the first `terms` measure terms (telescopes to 1 - 1/l[J])."""
    _check_prefix(tower, terms)
    return sum((measure_term(tower, j) for j in range(1, terms + 1)), Fraction(0))


def recursion_check(tower: IndexTower) -> bool:
    """Check t_{j+1} * r_{j+1} = s_1 ... s_j at every level pair.

    Over exact rationals the two sides coincide identically for any
    positive index data, so the informative content of the check is the
    integrality of every coefficient the identity mentions -- exactly
    what data read off a genuine normal subgroup lattice guarantees.
    Returns False when some entering coefficient is non-integral.
    """
    levels = len(tower)
    for j in range(1, levels):
        if tower.l_at(j) % tower.l_at(j - 1):
            return False  # s_j non-integral
    for j in range(1, levels):
        lj, lnext, dnext = tower.l_at(j), tower.l_at(j + 1), tower.d_at(j + 1)
        if lnext % dnext:
            return False  # t_{j+1} non-integral
        if (dnext * lj) % lnext:
            return False  # r_{j+1} non-integral
        t_next = lnext // dnext
        r_next = dnext * lj // lnext
        s_product = lj  # s_1 ... s_j telescopes to l[j]
        if t_next * r_next != s_product:
            return False
    return True


def alpha(tower: IndexTower, j: int) -> Fraction:
    """Consecutive-term ratio r_{j+1}(s_{j+1}-1) / (r_j s_j (s_j-1)).

    Defined for j+1 <= levels and s_j >= 2; a level with s_j = 1
    contributes no measure and the ratio degenerates there.
    """
    if not 1 <= j <= len(tower) - 1:
        raise ValueError(f"alpha needs levels j and j+1; got j = {j} of {len(tower)}")
    low = decompose(tower, j)
    high = decompose(tower, j + 1)
    if low.s == 1:
        raise DegenerateLevel(f"{tower.name}: s_{j} = 1, ratio undefined at level {j}")
    return Fraction(high.r * (high.s - 1), low.r * low.s * (low.s - 1))


def degenerate_levels(tower: IndexTower) -> list[int]:
    """Levels with s_j = 1 (they add nothing and have no growth ratio)."""
    return [j for j in range(1, len(tower) + 1) if decompose(tower, j).s == 1]


def alphas(tower: IndexTower) -> list[tuple[int, Fraction]]:
    """All defined (j, alpha_j) pairs, skipping degenerate levels."""
    out = []
    for j in range(1, len(tower)):
        if decompose(tower, j).s == 1:
            continue
        out.append((j, alpha(tower, j)))
    return out


def classify(tower: IndexTower, window: int = 10) -> GrowthClass:
    """Ratio-test verdict from the trailing `window` defined ratios.

    SubQuadratic if every ratio in the window is < 1, SuperQuadratic if
    every one is > 1, Indeterminate otherwise (including ratios equal to
    1).  A finite window stands in for the eventual behaviour of the
    sequence, so the verdict is a heuristic and is reported as such.
    """
    if window < 1:
        raise ValueError("window must be positive")
    defined = alphas(tower)
    if len(defined) < window:
        raise InsufficientData(
            f"{tower.name}: {len(defined)} defined ratio(s), window of {window} requested"
        )
    tail = [value for _, value in defined[-window:]]
    if all(value < 1 for value in tail):
        return GrowthClass.SUB_QUADRATIC
    if all(value > 1 for value in tail):
        return GrowthClass.SUPER_QUADRATIC
    return GrowthClass.INDETERMINATE


def is_prime_system(tower: IndexTower) -> bool:
    """True iff l[j] is the full product d[1]...d[j] at every level."""
    product = 1
    for j in range(1, len(tower) + 1):
        product *= tower.d_at(j)
        if tower.l_at(j) != product:
            return False
    return True


def is_nested(tower: IndexTower) -> bool:
    """True iff l[j] = d[j] at every level (each subgroup inside the last)."""
    return all(tower.l_at(j) == tower.d_at(j) for j in range(1, len(tower) + 1))


def gap_check_linear(tower: IndexTower, c: RationalLike, start: int = 1) -> bool:
    """Check d[j] < d[j+1] <= c * d[j] for every pair from `start` on."""
    c = as_fraction(c)
    if c <= 1:
        raise ValueError(f"linear gap constant must exceed 1, got {c}")
    if len(tower) < 2:
        raise ValueError("gap checks need at least two levels")
    for j in range(start, len(tower)):
        a, b = tower.d_at(j), tower.d_at(j + 1)
        if not (a < b and b * c.denominator <= a * c.numerator):
            return False
    return True


def gap_check_power(tower: IndexTower, delta: RationalLike, start: int = 1) -> bool:
    """Check d[j] < d[j+1] < d[j]**(1+delta) for every pair from `start` on.

    delta must be rational; the comparison b < a**(1 + p/q) is done as
    b**q < a**(p+q) in exact integer arithmetic.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError(f"power gap exponent must be positive, got {delta}")
    if len(tower) < 2:
        raise ValueError("gap checks need at least two levels")
    p, q = delta.numerator, delta.denominator
    for j in range(start, len(tower)):
        a, b = tower.d_at(j), tower.d_at(j + 1)
        if not (a < b and b**q < a ** (p + q)):
            return False
    return True


def first_linear_gap_index(tower: IndexTower, c: RationalLike) -> int:
    """Smallest j* such that the linear gap condition holds for all j >= j*.

    Returns len(tower) when even the last pair fails (the condition is
    then vacuous).  Early exceptions are reported this way rather than
    silently dropped.
    """
    c = as_fraction(c)
    start = len(tower)
    for j in range(len(tower) - 1, 0, -1):
        a, b = tower.d_at(j), tower.d_at(j + 1)
        if a < b and b * c.denominator <= a * c.numerator:
            start = j
        else:
            break
    return start


def first_power_gap_index(tower: IndexTower, delta: RationalLike) -> int:
    """Smallest j* such that the power gap condition holds for all j >= j*."""
    delta = as_fraction(delta)
    p, q = delta.numerator, delta.denominator
    start = len(tower)
    for j in range(len(tower) - 1, 0, -1):
        a, b = tower.d_at(j), tower.d_at(j + 1)
        if a < b and b**q < a ** (p + q):
            start = j
        else:
            break
    return start


def zeta_partial(indices: Iterable[int], s: RationalLike, terms: int) -> float:
    """Float partial sum of the index zeta series: sum of i**(-s).

    Sums over the `terms` smallest distinct indices with math.fsum, so
    the result carries one rounding per term plus the final rounding;
    for the exponents and index counts used here that is ~1e-15
    relative.  `terms` is capped at the number of distinct indices.
    """
    exponent = float(s) if isinstance(s, float) else float(as_fraction(s))
    if exponent <= 0:
        raise ValueError(f"exponent must be positive, got {s}")
    if terms < 0:
        raise ValueError("terms must be non-negative")
    pool = sorted({int(i) for i in indices})
    if pool and pool[0] < 1:
        raise ValueError("indices must be positive")
    return math.fsum(i ** (-exponent) for i in pool[:terms])


def running_product(values: Sequence[int]) -> tuple[int, ...]:
    """Partial products, used to build prime-system towers."""
    out = []
    acc = 1
    for v in values:
        acc *= v
        out.append(acc)
    return tuple(out)
