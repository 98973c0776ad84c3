"""Tree automorphisms for the first Grigorchuk group and its level towers.

The four generators act on the rooted binary tree by the standard
self-similar recursion: a swaps the two subtrees, and

    b = (a, c),   c = (a, d),   d = (1, b)

act trivially at the root while recursing into the halves.  Leaves at
depth n are indexed 0..2^n-1 with the first branching as the most
significant bit, so a at depth n is XOR with 2^(n-1).

Level-quotient orders are found by breadth-first closure over the
generated permutation group; nothing is imported from the literature.
Depth 5 (order around 4e6 on 32 points) is computable but takes a
minute and real memory, so it sits behind the same API with a raised
bound rather than a separate code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InsufficientLevels, LevelTooDeep
from .linear import order_mod_pk
from .tower import IndexTower

GENERATORS = "abcd"
_SECTIONS = {"b": ("a", "c"), "c": ("a", "d"), "d": (None, "b")}

MAX_LEVEL = 5


@dataclass(frozen=True)
class TreeAutomorphism:
    """A word in the generators a, b, c, d."""

    word: str

    def __post_init__(self) -> None:
        bad = set(self.word) - set(GENERATORS)
        if bad:
            raise ValueError(f"unknown generators {sorted(bad)}; expected letters from 'abcd'")

    def action(self, level: int) -> tuple[int, ...]:
        return level_action(self, level)


@lru_cache(maxsize=None)
def _generator_perm(gen: str, level: int) -> tuple[int, ...]:
    size = 1 << level
    half = size >> 1
    if gen == "a":
        return tuple(i ^ half for i in range(size))
    if level == 1:
        return tuple(range(size))
    left, right = _SECTIONS[gen]
    lperm = _generator_perm(left, level - 1) if left else tuple(range(half))
    rperm = _generator_perm(right, level - 1)
    return tuple(lperm) + tuple(half + x for x in rperm)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[x] for x in p)


def level_action(word: TreeAutomorphism | str, level: int) -> tuple[int, ...]:
    """Permutation induced on the 2^level leaves, letters applied left to right."""
    if level < 1:
        raise ValueError("level must be at least 1")
    text = word.word if isinstance(word, TreeAutomorphism) else TreeAutomorphism(word).word
    perm = tuple(range(1 << level))
    for letter in text:
        perm = _compose(perm, _generator_perm(letter, level))
    return perm


@dataclass(frozen=True)
class LevelQuotient:
    """Order of the image of the group on one tree level."""

    level: int
    order: int


def _closure_order(perms: list[tuple[int, ...]]) -> int:
    """Size of the permutation group generated by `perms`.

    Breadth-first closure with permutations stored as bytes; composing
    through bytes.translate keeps the inner loop in C.
    """
    size = len(perms[0])
    pad = bytes(range(256))
    tables = [bytes(p) + pad[size:] for p in perms]
    identity = pad[:size]
    seen = {identity}
    queue = [identity]
    head = 0
    while head < len(queue):
        current = queue[head]
        head += 1
        for table in tables:
            image = current.translate(table)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return len(seen)


@lru_cache(maxsize=None)
def _level_order(level: int) -> int:
    return _closure_order([_generator_perm(g, level) for g in GENERATORS])


def level_quotient_order(level: int) -> LevelQuotient:
    """Order of the level quotient, by closure enumeration.

    Levels up to 4 are instant; level 5 works on 32 points and several
    million elements, so expect a minute and a few hundred MB.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    if level > MAX_LEVEL:
        raise LevelTooDeep(f"level {level} beyond the enumeration bound {MAX_LEVEL}")
    return LevelQuotient(level=level, order=_level_order(level))


def grig_tower(levels: int) -> IndexTower:
    """Nested tower of level-kernel indices (d = l by construction)."""
    if levels < 1:
        raise ValueError("levels must be positive")
    orders = tuple(level_quotient_order(j).order for j in range(1, levels + 1))
    return IndexTower(name=f"grigorchuk({levels})", d=orders, l=orders)


def d1_series_terms(orders: list[int] | tuple[int, ...], terms: int) -> list[Fraction]:
    """Exact terms of the lower-bound series built from level orders.

    Element 0 is (o3 - 1)/o3; element j >= 1 is
    (o_j / o_(j+2)) * (o_(j+3)/o_(j+2) - 1) / (o_(j+3)/o_(j+2)),
    which needs orders through level terms + 3.  The values are reported
    as-is; whether they tend to zero is for the caller to inspect, and
    with doubly exponential level orders they visibly shrink.
    """
    if terms < 0:
        raise ValueError("terms must be non-negative")
    needed = terms + 3
    if len(orders) < 3:
        raise InsufficientLevels("need level orders through level 3 for the leading term")
    if len(orders) < needed:
        raise InsufficientLevels(
            f"need level orders through level {needed}, have {len(orders)}"
        )
    o = [None] + [int(x) for x in orders]  # 1-indexed
    out = [Fraction(o[3] - 1, o[3])]
    for j in range(1, terms + 1):
        step = Fraction(o[j + 3], o[j + 2])
        out.append(Fraction(o[j], o[j + 2]) * (step - 1) / step)
    return out


def slnzp_tower(n: int, p: int, levels: int) -> IndexTower:
    """Nested congruence tower of the p-adic special linear group.

    The finite-index normal subgroups are the mod-p^j kernels, so
    d[j] = l[j] = |SL(n, Z/p^j)|.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if levels < 1:
        raise ValueError("levels must be positive")
    orders = tuple(order_mod_pk(n, p, j, det_one=True) for j in range(1, levels + 1))
    return IndexTower(name=f"SL({n},Z_{p})({levels})", d=orders, l=orders)
