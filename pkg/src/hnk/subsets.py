"""Subsets of [n] = {1, ..., n} stored as integer bit vectors.

Element ``i`` of the ground set lives in bit ``i - 1``, so the encoding of a
subset is its characteristic vector read as a binary number.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

MAX_N = 16


class UsageError(ValueError):
    """Raised when an operation is called with arguments outside its contract."""


def check_n(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise UsageError(f"ground-set size must satisfy 1 <= n <= {MAX_N}, got {n!r}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(bits: int) -> int:
    return bits.bit_count()


def from_elements(elements: Iterable[int]) -> int:
    """Encode 1-based elements as a bit mask."""
    bits = 0
    for e in elements:
        if e < 1:
            raise UsageError(f"elements are 1-based, got {e}")
        bits |= 1 << (e - 1)
    return bits


def to_elements(bits: int) -> list[int]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def format_bits(bits: int) -> str:
    return "{" + ",".join(str(e) for e in to_elements(bits)) + "}"


def parse_subset(text: str) -> int:
    """Inverse of :func:`format_bits`; accepts ``"{1,3}"``, ``"1,3"`` or ``"{}"``."""
    body = text.strip().removeprefix("{").removesuffix("}").strip()
    if not body:
        return 0
    try:
        return from_elements(int(tok) for tok in body.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse subset {text!r}") from exc


@dataclass(frozen=True, order=True)
class SubsetId:
    """A subset of [n]. Immutable; ``bits`` never has a bit at position >= n."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise UsageError(f"bits {self.bits:#x} do not fit in a ground set of size {self.n}")

    @classmethod
    def of(cls, n: int, elements: Iterable[int] = ()) -> SubsetId:
        return cls(from_elements(elements), n)

    @property
    def elements(self) -> list[int]:
        return to_elements(self.bits)

    def __str__(self) -> str:
        return format_bits(self.bits)

    def __contains__(self, element: int) -> bool:
        return bool(self.bits >> (element - 1) & 1)

    def __len__(self) -> int:
        return weight(self)


def weight(x: SubsetId) -> int:
    return x.bits.bit_count()


def _same_n(x: SubsetId, y: SubsetId) -> None:
    if x.n != y.n:
        raise UsageError(f"ground-set sizes differ: {x.n} vs {y.n}")


def symmetric_difference(x: SubsetId, y: SubsetId) -> SubsetId:
    _same_n(x, y)
    return SubsetId(x.bits ^ y.bits, x.n)


def intersection(x: SubsetId, y: SubsetId) -> SubsetId:
    _same_n(x, y)
    return SubsetId(x.bits & y.bits, x.n)


def complement(x: SubsetId) -> SubsetId:
    return SubsetId(x.bits ^ full_mask(x.n), x.n)


def subset_masks_of_size(n: int, s: int) -> list[int]:
    """Bit masks of all ``s``-subsets of [n] in ascending order."""
    if not 0 <= s <= n:
        raise UsageError(f"subset size must satisfy 0 <= s <= n, got s={s}, n={n}")
    masks = [sum(1 << i for i in combo) for combo in combinations(range(n), s)]
    masks.sort()
    return masks


def subsets_of_size(n: int, s: int) -> list[SubsetId]:
    check_n(n)
    return [SubsetId(m, n) for m in subset_masks_of_size(n, s)]
