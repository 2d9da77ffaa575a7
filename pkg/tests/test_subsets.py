import pytest
from hypothesis import given, strategies as st

from hnk.subsets import (
    MAX_N, SubsetId, UsageError, complement, format_bits, from_elements, intersection,
    parse_subset, subset_masks_of_size, subsets_of_size, symmetric_difference, to_elements, weight,
)
from oracles import naive_subsets, to_mask


def test_encoding_examples():
    assert from_elements([1, 3]) == 0b101
    assert to_elements(0b101) == [1, 3]
    assert str(SubsetId.of(4, [2, 4])) == "{2,4}"
    assert format_bits(0) == "{}"


def test_bit_outside_ground_set_rejected():
    with pytest.raises(UsageError):
        SubsetId(0b1000, 3)
    with pytest.raises(UsageError):
        SubsetId(0, MAX_N + 1)
    with pytest.raises(UsageError):
        from_elements([0])


def test_mismatched_ground_sets():
    with pytest.raises(UsageError):
        symmetric_difference(SubsetId(1, 3), SubsetId(1, 4))


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                                                      st.integers(0, (1 << n) - 1))))
def test_set_algebra_matches_python_sets(args):
    n, a, b = args
    x, y = SubsetId(a, n), SubsetId(b, n)
    sx, sy = set(x.elements), set(y.elements)
    assert set(symmetric_difference(x, y).elements) == sx ^ sy
    assert set(intersection(x, y).elements) == sx & sy
    assert set(complement(x).elements) == set(range(1, n + 1)) - sx
    assert weight(x) == len(sx) == len(x)
    assert all((e in x) == (e in sx) for e in range(1, n + 1))


@given(st.integers(0, (1 << 12) - 1))
def test_parse_round_trip(bits):
    assert parse_subset(format_bits(bits)) == bits


def test_parse_rejects_garbage():
    with pytest.raises(UsageError):
        parse_subset("{1,x}")


@pytest.mark.parametrize("n", range(1, 8))
def test_layers_match_naive_enumeration(n):
    naive = naive_subsets(n)
    for s in range(n + 1):
        masks = subset_masks_of_size(n, s)
        assert masks == sorted(masks)
        assert sorted(masks) == sorted(to_mask(v) for v in naive if len(v) == s)
    assert len(subsets_of_size(n, n // 2)) == len(subset_masks_of_size(n, n // 2))
