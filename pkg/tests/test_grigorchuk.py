import os
from fractions import Fraction

import pytest

from resavg.errors import InsufficientLevels, LevelTooDeep
from resavg.grigorchuk import (
    GENERATORS,
    TreeAutomorphism,
    d1_series_terms,
    grig_tower,
    level_action,
    level_quotient_order,
    slnzp_tower,
)
from resavg.linear import order_mod_pk
from resavg.tower import ave_partial, decompose, is_nested

# orders produced once by the closure enumeration and frozen here
GOLDEN_ORDERS = (2, 8, 128, 4096)
LEVEL5_ORDER = 4194304


def identity(level):
    return tuple(range(1 << level))


class TestLevelAction:
    def test_root_swap(self):
        assert level_action("a", 1) == (1, 0)

    def test_d_fixes_level_one(self):
        assert level_action("d", 1) == (0, 1)

    def test_involutions(self):
        for g in GENERATORS:
            for level in range(1, 6):
                assert level_action(g + g, level) == identity(level)

    def test_bcd_is_identity(self):
        for level in range(1, 6):
            assert level_action("bcd", level) == identity(level)

    def test_defining_relations(self):
        for level in range(1, 5):
            assert level_action("ad" * 4, level) == identity(level)
            assert level_action("adacac" * 4, level) == identity(level)

    def test_word_validation(self):
        with pytest.raises(ValueError):
            TreeAutomorphism("abq")

    def test_actions_are_permutations(self):
        for word in ("ab", "cad", "bbadc"):
            for level in (1, 3, 5):
                perm = level_action(word, level)
                assert sorted(perm) == list(range(1 << level))


class TestLevelQuotients:
    def test_golden_orders(self):
        for level, order in enumerate(GOLDEN_ORDERS, start=1):
            assert level_quotient_order(level).order == order

    def test_orders_are_powers_of_two_and_divide_upward(self):
        orders = [level_quotient_order(n).order for n in range(1, 5)]
        for a, b in zip(orders, orders[1:]):
            assert b % a == 0
        for o in orders:
            assert o & (o - 1) == 0

    def test_depth_guard(self):
        with pytest.raises(LevelTooDeep):
            level_quotient_order(6)

    @pytest.mark.skipif(
        not os.environ.get("RESAVG_DEEP"), reason="level-5 closure takes a while; set RESAVG_DEEP=1"
    )
    def test_level_five_order(self):
        assert level_quotient_order(5).order == LEVEL5_ORDER


class TestGrigTower:
    def test_tower_matches_orders(self):
        t = grig_tower(2)
        assert t.d == t.l == (2, 8)

    def test_nested_with_unit_t(self):
        t = grig_tower(4)
        assert is_nested(t)
        assert all(decompose(t, j).t == 1 for j in range(1, 5))

    def test_partial_average_from_orders(self):
        t = grig_tower(4)
        expected = sum(
            Fraction(GOLDEN_ORDERS[j], GOLDEN_ORDERS[j - 1]) - 1 for j in range(1, 4)
        ) + (GOLDEN_ORDERS[0] - 1)
        assert ave_partial(t, 4) == expected == 50


class TestD1Series:
    def test_leading_term(self):
        orders = (2, 8, 128, 4096)
        terms = d1_series_terms(orders, 1)
        assert terms[0] == Fraction(127, 128)

    def test_term_rewrite_identity(self):
        orders = (2, 8, 128, 4096)
        terms = d1_series_terms(orders, 1)
        o1, o3, o4 = Fraction(2), Fraction(128), Fraction(4096)
        assert terms[1] == (o1 / o3) * (1 - o3 / o4)

    def test_full_list_through_level_five(self):
        orders = GOLDEN_ORDERS + (LEVEL5_ORDER,)
        terms = d1_series_terms(orders, 2)
        assert terms == [
            Fraction(127, 128),
            Fraction(31, 2048),
            Fraction(1023, 524288),
        ]
        # with doubly exponential orders the terms visibly shrink
        assert terms[2] < terms[1] < terms[0]

    def test_insufficient_levels(self):
        with pytest.raises(InsufficientLevels):
            d1_series_terms((2, 8), 0)
        with pytest.raises(InsufficientLevels):
            d1_series_terms((2, 8, 128), 1)


class TestSlnzpTower:
    def test_orders_chain(self):
        t = slnzp_tower(2, 2, 3)
        assert t.d == t.l == (6, 48, 384)

    def test_nested(self):
        assert is_nested(slnzp_tower(2, 2, 5))

    def test_matches_order_formula(self):
        t = slnzp_tower(2, 3, 4)
        assert t.d == tuple(order_mod_pk(2, 3, k, det_one=True) for k in range(1, 5))

    def test_unbounded_average(self):
        t = slnzp_tower(2, 2, 20)
        assert ave_partial(t, 20) == 5 + 19 * 7
        s_values = [decompose(t, j).s for j in range(1, 21)]
        assert s_values[0] == 6
        assert all(s == 8 for s in s_values[1:])

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            slnzp_tower(1, 2, 3)
