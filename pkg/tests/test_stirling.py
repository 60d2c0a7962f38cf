import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchpos.algebra import stirling_second
from matchpos.stirling import (
    WeightedConfiguration,
    admitting_partition_count,
    alternating_stirling2,
    block_labels,
    compositions,
    cycle_count,
    finest_admitting_partition,
    group_weight_count,
    ordered_set_partitions,
    permutation_checks,
    permutation_identity_by_sigma,
    permutation_identity_lhs,
    permutation_weight,
    phi_checks,
    phi_polynomiality,
    phi_sum,
    random_distinct_rationals,
    repeated_limit_values,
    set_partitions,
)

rationals = st.builds(F, st.integers(-50, 50), st.integers(1, 20))


def test_enumerator_counts():
    assert sum(1 for _ in set_partitions(range(5))) == 52  # Bell(5)
    assert sum(1 for _ in ordered_set_partitions(range(4))) == 75  # Fubini(4)
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(1, 0)) == []


def test_weighted_configuration_validation():
    with pytest.raises(ValueError):
        WeightedConfiguration(((0,), (0, 1)), (0, 0))
    with pytest.raises(ValueError):
        WeightedConfiguration(((0,),), (-1,))
    cfg = WeightedConfiguration(((0, 1), (2,)), (1, 0))
    assert cfg.sums([1, 2, 4]) == (3, 4)
    # (+1/2) P_1(3) P_0(4) = (1/2) * 3
    assert cfg.evaluate([1, 2, 4]) == F(3, 2)


def test_phi_small_cases():
    assert phi_sum(2, 0, [F(1, 3), 7]) == 0
    assert phi_sum(3, 1, [2, 3, 4]) == 0
    assert phi_sum(3, 1, [2, 3, 4], method="ordered") == 0
    # outside the vanishing range (w = g - 1): -P_1(5) + 2 * (1/2)(P_1(2) + P_1(3)) = -10 + 4
    assert phi_sum(2, 1, [2, 3]) == -6
    assert phi_sum(2, 1, [2, 3], method="ordered") == -6


def test_phi_rejects_bad_input():
    with pytest.raises(ValueError):
        phi_sum(2, 0, [1, 1])
    with pytest.raises(ValueError):
        phi_sum(2, 0, [1, 2], method="sideways")
    with pytest.raises(ValueError):
        phi_sum(3, 0, [1, 2])


@given(st.lists(rationals, min_size=3, max_size=4, unique=True), st.data())
def test_phi_vanishes_in_range(c, data):
    g = len(c)
    w = data.draw(st.integers(0, g - 2))
    assert phi_sum(g, w, c) == 0


@given(st.lists(rationals, min_size=2, max_size=4, unique=True), st.data())
def test_phi_two_routes_agree(c, data):
    g = len(c)
    w = data.draw(st.integers(0, g))
    assert phi_sum(g, w, c) == phi_sum(g, w, c, method="ordered")


def test_phi_checks_are_seeded():
    a, seeds_a = phi_checks(4, samples=2, seed=5)
    b, seeds_b = phi_checks(4, samples=2, seed=5)
    assert seeds_a == seeds_b and all(c.passed for c in a)
    assert [c.params for c in a] == [c.params for c in b]
    assert len(random_distinct_rationals(6, random.Random(1), bound=3)) == 6


def test_phi_polynomial_in_one_variable_and_repeated_limit():
    ok, bad = phi_polynomiality(3, 2, [F(1, 2), F(5, 3)], range(0, 8))
    assert ok and bad == []
    vals = repeated_limit_values(3, 1, [F(1), F(2), F(0)])
    assert vals == [0] * 5


def test_cycles_and_weights():
    assert cycle_count((0, 1, 2)) == 3
    assert cycle_count((1, 2, 0)) == 1
    assert permutation_weight((1, 0, 2, 3)) == 1


def test_group_weight_count():
    # Sym(3): weights 0, 1, 2 occur 1, 3, 2 times
    assert [group_weight_count([3], w) for w in range(3)] == [1, 3, 2]
    # Sym(2) x Sym(2): 1, 2, 1
    assert [group_weight_count([2, 2], w) for w in range(3)] == [1, 2, 1]


def test_permutation_identity_examples():
    assert permutation_identity_lhs([1, 1], 0) == 0
    assert permutation_identity_lhs([2, 1, 1], 1) == 0
    with pytest.raises(ValueError):
        permutation_identity_lhs([1, 1], 2)


def test_admitting_partitions_identity_and_transposition():
    sizes = [1, 1, 1]
    labels = block_labels(sizes)
    ident = (0, 1, 2)
    assert len(finest_admitting_partition(ident, labels)) == 3
    assert [admitting_partition_count(ident, sizes, r) for r in (1, 2, 3)] == [stirling_second(3, r) for r in (1, 2, 3)]
    swap = (1, 0, 2)
    assert finest_admitting_partition(swap, labels) == [frozenset({0, 1}), frozenset({2})]
    assert [admitting_partition_count(swap, sizes, r) for r in (1, 2, 3)] == [1, 1, 0]


def test_alternating_stirling2():
    assert alternating_stirling2(1) == 1
    assert [alternating_stirling2(m) for m in range(2, 13)] == [0] * 11
    with pytest.raises(ValueError):
        alternating_stirling2(0)


def test_per_sigma_route():
    total, checks = permutation_identity_by_sigma([2, 1, 1], 1)
    assert total == 0 and all(c.passed for c in checks)
    # outside the range the per-sigma route still reproduces the left side
    total, _ = permutation_identity_by_sigma([1, 1], 1)
    assert total == permutation_identity_lhs([1, 1], 1)


def test_permutation_checks_small():
    checks = permutation_checks(5)
    assert checks and all(c.passed for c in checks)
