"""Exact neighbour-count sequences for H(n, k) and brute-force counterparts.

Every family counts common neighbours of two fixed vertices in a particular
regime.  The closed forms are products of two binomials.  ``bruteforce_values``
recounts the same quantity on the actual graph, so each table can be checked
against enumeration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .hgraph import HGraph, build_graph
from .subsets import SubsetId, UsageError, from_elements


def binom(a: int, b: int) -> int:
    """C(a, b), zero outside 0 <= b <= a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


class Family(str, enum.Enum):
    U_2KM1 = "u-2km1"            # n = 2k-1, neighbours in the k-layer of a 2m-set
    U_2KP1 = "u-2kp1"            # n = 2k+1, neighbours in the k-layer of a 2m-set
    U_2KP1_ODD = "u-2kp1-odd"    # n = 2k+1, neighbours in the (k+1)-layer of a (2m-1)-set
    U_GENERAL = "u-general"      # common neighbours of {a} and X, a in X, |X| = 2p+1
    V_GENERAL = "v-general"      # common neighbours of {a} and X, a not in X, |X| = 2p+1


def _formula(family: Family, n: int, k: int, i: int) -> int:
    if family is Family.U_2KM1 or family is Family.U_2KP1:
        return binom(2 * i, i) * binom(n - 2 * i, k - i)
    if family is Family.U_2KP1_ODD:
        return binom(2 * i - 1, i) * binom(n - 2 * i + 1, k - i + 1)
    if family is Family.U_GENERAL:
        return binom(2 * i, i) * binom(n - 2 * i, k - i)
    return binom(2 * i + 2, i + 1) * binom(n - 2 * i - 2, k - i - 1)


def literal_odd_layer_value(k: int, m: int) -> int:
    """The odd-layer count exactly as printed in the source, C(2m-1,m)*C(2k+2m+2,k-m+1).

    Kept only so the report can show how far it is from enumeration.
    """
    return binom(2 * m - 1, m) * binom(2 * k + 2 * m + 2, k - m + 1)


def _resolve(family: Family, k: int, n: int | None) -> tuple[int, range]:
    if k < 1:
        raise UsageError(f"k must be positive, got {k}")
    if family is Family.U_2KM1:
        if k < 2:
            raise UsageError("u-2km1 needs k >= 2")
        _match(n, 2 * k - 1, family)
        return 2 * k - 1, range(1, k)
    if family is Family.U_2KP1:
        _match(n, 2 * k + 1, family)
        return 2 * k + 1, range(1, k + 1)
    if family is Family.U_2KP1_ODD:
        _match(n, 2 * k + 1, family)
        return 2 * k + 1, range(1, k + 2)
    if n is None:
        raise UsageError(f"{family.value} needs --n")
    if n < 2 * k + 2:
        raise UsageError(f"{family.value} needs n >= 2k+2, got n={n}, k={k}")
    if family is Family.U_GENERAL:
        return n, range(1, (k - 1) // 2 + 1)
    return n, range(0, (k - 1) // 2 + 1)


def _match(n: int | None, expected: int, family: Family) -> None:
    if n is not None and n != expected:
        raise UsageError(f"{family.value} fixes n = {expected}, got n={n}")


@dataclass(frozen=True)
class SequenceTable:
    family: Family
    n: int
    k: int
    values: dict[int, int] = field(default_factory=dict)

    @property
    def indices(self) -> list[int]:
        return sorted(self.values)

    def __getitem__(self, i: int) -> int:
        if i not in self.values:
            raise UsageError(f"index {i} outside {self.family.value} range {self.indices}")
        return self.values[i]

    def to_json_dict(self) -> dict:
        return {"family": self.family.value, "n": self.n, "k": self.k,
                "values": {str(i): v for i, v in sorted(self.values.items())}}

    def format(self) -> str:
        var = "p" if self.family in (Family.U_GENERAL, Family.V_GENERAL) else "m"
        rows = [(str(i), str(v)) for i, v in sorted(self.values.items())]
        w0 = max([len(var)] + [len(a) for a, _ in rows])
        w1 = max([len("value")] + [len(b) for _, b in rows])
        lines = [f"# {self.family.value} n={self.n} k={self.k}", f"{var:>{w0}}  {'value':>{w1}}"]
        lines += [f"{a:>{w0}}  {b:>{w1}}" for a, b in rows]
        return "\n".join(lines)


def u_sequence(family: Family | str, k: int, n: int | None = None) -> SequenceTable:
    family = Family(family)
    n, idx = _resolve(family, k, n)
    return SequenceTable(family, n, k, {i: _formula(family, n, k, i) for i in idx})


def common_neighbor_count_bruteforce(g: HGraph, x: SubsetId | int, y: SubsetId | int,
                                     restrict_to_size: int | None = None) -> int:
    xb = x.bits if isinstance(x, SubsetId) else int(x)
    yb = y.bits if isinstance(y, SubsetId) else int(y)
    g.require_vertex(xb)
    g.require_vertex(yb)
    nbrs = xb ^ g.edge_masks
    diff = nbrs ^ yb
    ok = np.array([int(d).bit_count() == g.k for d in diff.tolist()], dtype=bool)
    if restrict_to_size is not None:
        ok &= np.array([int(v).bit_count() == restrict_to_size for v in nbrs.tolist()], dtype=bool)
    return int(ok.sum())


def _witness_pair(family: Family, n: int, k: int, i: int) -> tuple[int, int, int | None]:
    if family in (Family.U_2KM1, Family.U_2KP1):
        x = from_elements(range(1, 2 * i + 1))
        return x, x, k
    if family is Family.U_2KP1_ODD:
        x = from_elements(range(1, 2 * i))
        return x, x, k + 1
    x = from_elements(range(1, 2 * i + 2))
    a = 1 if family is Family.U_GENERAL else 2 * i + 2
    return from_elements([a]), x, None


def bruteforce_values(table: SequenceTable, g: HGraph | None = None) -> dict[int, int]:
    """Recount every entry of ``table`` on H(n, k) itself."""
    g = g or build_graph(n=table.n, k=table.k)
    out = {}
    for i in table.indices:
        x, y, size = _witness_pair(table.family, table.n, table.k, i)
        out[i] = common_neighbor_count_bruteforce(g, x, y, restrict_to_size=size)
    return out


@dataclass
class MonotonicityVerdict:
    ok: bool
    checked: list[tuple[int, str]]
    first_violation: int | None = None

    def describe(self) -> str:
        if self.ok:
            return f"ok over {len(self.checked)} steps"
        return f"violated at index {self.first_violation}"


def expected_shape(table: SequenceTable) -> list[tuple[int, str]]:
    """(i, relation) pairs asserted between entry i and entry i+1: '>' '<' or '='."""
    fam, k = table.family, table.k
    idx = set(table.indices)
    steps = []
    if fam in (Family.U_2KM1, Family.U_2KP1, Family.U_2KP1_ODD):
        # unimodal, symmetric about c2/2; u_(k+1) of the odd-layer family is [n] itself and sits outside the symmetry
        c2 = k if fam is Family.U_2KM1 else k + 1
        last = k if fam is Family.U_2KP1_ODD else max(idx, default=0)
        for i in sorted(idx):
            if i + 1 > last:
                continue
            if 2 * (i + 1) <= c2:
                steps.append((i, ">"))
            elif 2 * i >= c2:
                steps.append((i, "<"))
            else:
                steps.append((i, "="))
    elif fam is Family.U_GENERAL:
        steps = [(p, ">") for p in range(1, (k - 3) // 2 + 1) if p + 1 in idx]
    else:
        steps = [(p, ">") for p in range(0, (k - 3) // 2) if p + 1 in idx]
    return steps


def monotonicity_check(table: SequenceTable) -> MonotonicityVerdict:
    steps = expected_shape(table)
    for i, rel in steps:
        a, b = table.values[i], table.values[i + 1]
        holds = a > b if rel == ">" else a < b if rel == "<" else a == b
        if not holds:
            return MonotonicityVerdict(False, steps, i)
    return MonotonicityVerdict(True, steps)


def applicable_families(n: int, k: int) -> list[Family]:
    fams = []
    if k >= 2 and n == 2 * k - 1:
        fams.append(Family.U_2KM1)
    if n == 2 * k + 1:
        fams += [Family.U_2KP1, Family.U_2KP1_ODD]
    if n >= 2 * k + 2:
        fams += [Family.U_GENERAL, Family.V_GENERAL]
    return fams
