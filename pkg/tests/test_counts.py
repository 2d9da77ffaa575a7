import math

import pytest
from hypothesis import given, strategies as st

from hnk.counts import (
    Family, applicable_families, binom, bruteforce_values, common_neighbor_count_bruteforce,
    expected_shape, literal_odd_layer_value, monotonicity_check, u_sequence,
)
from hnk.hgraph import build_graph
from hnk.subsets import SubsetId, UsageError, from_elements


@given(st.integers(-5, 40), st.integers(-5, 40))
def test_binom_zero_outside_range(a, b):
    expect = math.comb(a, b) if 0 <= b <= a else 0
    assert binom(a, b) == expect


def test_examples():
    assert u_sequence("u-2km1", 3).values == {1: 6, 2: 6}
    assert u_sequence("u-general", 3, 8).values == {1: 30}
    assert u_sequence("v-general", 5, 12)[0] == 420 == 2 * math.comb(10, 4)


def test_bruteforce_examples():
    g = build_graph(n=5, k=3)
    x = SubsetId.of(5, [1, 2])
    assert common_neighbor_count_bruteforce(g, x, x, restrict_to_size=3) == 6
    g9 = build_graph(n=9, k=3)
    assert common_neighbor_count_bruteforce(g9, 1, 2) == 2 * math.comb(7, 2) == 42
    assert common_neighbor_count_bruteforce(g, 7, 7) == g.degree


def test_bruteforce_checks_membership():
    from hnk.hgraph import Component
    g = build_graph(n=4, k=2, component=Component.EVEN)
    with pytest.raises(UsageError):
        common_neighbor_count_bruteforce(g, 1, 0)


def test_usage_errors():
    with pytest.raises(UsageError):
        u_sequence("u-2km1", 1)
    with pytest.raises(UsageError):
        u_sequence("u-2kp1", 3, 8)
    with pytest.raises(UsageError):
        u_sequence("u-general", 3)
    with pytest.raises(UsageError):
        u_sequence("u-general", 4, 9)
    with pytest.raises(UsageError):
        u_sequence("v-general", 3, 8)[5]


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 11) for k in range(1, n)])
def test_closed_forms_equal_enumeration(n, k):
    g = build_graph(n=n, k=k)
    for fam in applicable_families(n, k):
        t = u_sequence(fam, k, n)
        assert bruteforce_values(t, g) == t.values
        assert all(v > 0 for v in t.values.values())


def test_counts_do_not_depend_on_chosen_representative():
    g = build_graph(n=9, k=4)
    for m in range(1, 5):
        reps = [from_elements(range(1, 2 * m + 1)), from_elements(range(10 - 2 * m, 10))]
        counts = {common_neighbor_count_bruteforce(g, x, x, restrict_to_size=4) for x in reps}
        assert counts == {u_sequence("u-2kp1", 4)[m]}


@pytest.mark.parametrize("k", range(2, 26))
def test_symmetries(k):
    t = u_sequence("u-2km1", k)
    assert all(t[m] == t[k - m] for m in range(1, k))
    t = u_sequence("u-2kp1", k)
    assert all(t[m] == t[k - m + 1] for m in range(1, k + 1))
    t = u_sequence("u-2kp1-odd", k)
    assert all(t[m] == t[k - m + 1] for m in range(1, k + 1))


def test_odd_layer_form_as_printed_disagrees_with_enumeration():
    t = u_sequence("u-2kp1-odd", 3)
    brute = bruteforce_values(t)
    assert brute == t.values
    assert [literal_odd_layer_value(3, m) for m in range(1, 5)] != list(brute.values())


def test_monotonicity_examples():
    v = monotonicity_check(u_sequence("u-general", 7, 16))
    assert v.ok and v.checked == [(1, ">"), (2, ">")]
    t = u_sequence("u-2km1", 5)
    assert expected_shape(t) == [(1, ">"), (2, "="), (3, "<")]
    assert monotonicity_check(t).ok
    t = u_sequence("u-2kp1", 3)
    assert t.values == {1: 20, 2: 18, 3: 20}
    assert monotonicity_check(t).ok


def test_violation_is_reported():
    t = u_sequence("u-2km1", 5)
    broken = type(t)(t.family, t.n, t.k, {**t.values, 3: 1})
    v = monotonicity_check(broken)
    assert not v.ok and v.first_violation == 2


@pytest.mark.parametrize("k", range(1, 26))
def test_decreasing_chain_exact(k):
    for n in range(2 * k + 2, 2 * k + 11):
        for fam in (Family.U_GENERAL, Family.V_GENERAL):
            t = u_sequence(fam, k, n)
            assert monotonicity_check(t).ok
            for p, _ in expected_shape(t):
                assert t[p] > t[p + 1]


def test_format_and_json():
    t = u_sequence("u-2km1", 3)
    assert t.format().splitlines() == ["# u-2km1 n=5 k=3", "m  value", "1      6", "2      6"]
    assert t.to_json_dict() == {"family": "u-2km1", "n": 5, "k": 3, "values": {"1": 6, "2": 6}}
