"""Arc- and geodesic-transitivity of H(n, k), decided with the brute-force stabilizer."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .autsearch import StabilizerResult, stabilizer, translations_transitive
from .hgraph import HGraph, bfs_levels
from .subsets import UsageError

log = logging.getLogger(__name__)

PATH_CAP = 10_000_000


class GeodesicCapExceeded(UsageError):
    pass


@dataclass(frozen=True)
class GeodesicPath:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def _distance_array(g: HGraph, source: int) -> np.ndarray:
    dist = np.full(1 << g.n, -1, dtype=np.int64)
    for d, level in enumerate(bfs_levels(g, source)):
        dist[level] = d
    return dist


def geodesic_array(g: HGraph, source: int, s: int) -> np.ndarray:
    """All s-geodesics from ``source`` as rows of vertex encodings, in lexicographic order."""
    dist = _distance_array(g, source)
    paths = np.array([[source]], dtype=np.int64)
    if s > dist.max():
        log.info("no %d-geodesics from %d: eccentricity is %d", s, source, dist.max())
        return np.empty((0, s + 1), dtype=np.int64)
    for step in range(1, s + 1):
        nxt = paths[:, -1:] ^ g.edge_masks[None, :]
        keep = dist[nxt] == step
        rows, cols = np.nonzero(keep)
        if len(rows) > PATH_CAP:
            raise GeodesicCapExceeded(
                f"more than {PATH_CAP} geodesics of length {step}; refusing to enumerate")
        paths = np.concatenate([paths[rows], nxt[rows, cols][:, None]], axis=1)
        paths = paths[np.lexsort(paths.T[::-1])]
    return paths


def enumerate_geodesics(g: HGraph, source: int, s: int) -> list[GeodesicPath]:
    return [GeodesicPath(tuple(row)) for row in geodesic_array(g, source, s).tolist()]


@dataclass
class GeodesicOrbits:
    length: int
    count: int
    representatives: list[tuple[int, ...]]

    @property
    def transitive(self) -> bool:
        return len(self.representatives) <= 1


def _row_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()


def orbit_labels(points: np.ndarray, generators: np.ndarray) -> np.ndarray:
    """Orbit labels of tuples of positions (rows of ``points``) under the group generated by
    ``generators``; each label is the index of the smallest row in its orbit."""
    m = len(points)
    keys = _row_keys(points)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    images = []
    for gen in generators:
        img_keys = _row_keys(gen[points])
        at = np.searchsorted(sorted_keys, img_keys)
        at = np.minimum(at, m - 1)
        if not np.all(sorted_keys[at] == img_keys):
            raise AssertionError("generator does not preserve the point set")
        images.append(order[at])
    labels = np.arange(m)
    while True:
        before = labels.copy()
        for img in images:
            np.minimum.at(labels, img, labels)
            labels = np.minimum(labels, labels[img])
        labels = labels[labels]
        if np.array_equal(labels, before):
            return labels


def geodesic_orbits(g: HGraph, stab: StabilizerResult, s: int) -> GeodesicOrbits:
    """Orbits of the root stabilizer on the s-geodesics starting at the root."""
    paths = geodesic_array(g, stab.root, s)
    if len(paths) == 0:
        return GeodesicOrbits(s, 0, [])
    labels = orbit_labels(g.index[paths], stab.generators)
    reps = [tuple(int(v) for v in paths[i]) for i in np.unique(labels)]
    return GeodesicOrbits(s, len(paths), reps)


@dataclass
class SGeodesicResult:
    s: int
    transitive: bool
    orbits: dict[int, GeodesicOrbits] = field(default_factory=dict)

    @property
    def failing_length(self) -> int | None:
        for i in sorted(self.orbits):
            if not self.orbits[i].transitive:
                return i
        return None

    @property
    def max_transitive(self) -> int:
        """Largest s' <= s for which the graph is s'-geodesic transitive."""
        fail = self.failing_length
        return self.s if fail is None else fail - 1


def _root_stabilizer(g: HGraph, stab: StabilizerResult | None) -> StabilizerResult:
    if not translations_transitive(g):
        raise AssertionError(f"{g.params.label} is not vertex-transitive under translations")
    if stab is None:
        stab = stabilizer(g, materialize=False)
    return stab


def is_s_geodesic_transitive(g: HGraph, s: int, stab: StabilizerResult | None = None) -> SGeodesicResult:
    """Single stabilizer orbit on i-geodesics from the root for every i <= s."""
    stab = _root_stabilizer(g, stab)
    result = SGeodesicResult(s, True)
    for i in range(1, s + 1):
        orb = geodesic_orbits(g, stab, i)
        result.orbits[i] = orb
        if not orb.transitive:
            result.transitive = False
            break
    return result


def is_arc_transitive(g: HGraph, stab: StabilizerResult | None = None) -> bool:
    stab = _root_stabilizer(g, stab)
    if g.degree == 0:
        return True
    nbrs = g.index[g.neighbors(stab.root)]
    return len(np.unique(orbit_labels(nbrs[:, None], stab.generators))) == 1


class Classification(str, enum.Enum):
    GEODESIC_TRANSITIVE = "geodesic-transitive"
    NOT_2_GEODESIC_TRANSITIVE = "not-2-geodesic-transitive"
    UNCLASSIFIED = "unclassified"


EXCEPTIONS = frozenset({(5, 3), (6, 4), (7, 4)})


def classify_geodesic_transitivity(n: int, k: int) -> Classification:
    if not 1 <= k <= n - 1:
        raise UsageError(f"classification needs 1 <= k <= n-1, got n={n}, k={k}")
    if k in (1, 2) or k == n - 1 or (n, k) in EXCEPTIONS:
        return Classification.GEODESIC_TRANSITIVE
    if n != k + 1:
        return Classification.NOT_2_GEODESIC_TRANSITIVE
    return Classification.UNCLASSIFIED


@dataclass
class TransitivityVerdict:
    arc_transitive: bool
    s_geodesic_transitive: dict[int, bool]
    geodesic_transitive: bool
    diameter: int
    witness_orbits: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def s_max_transitive(self) -> int:
        best = 0
        for s in sorted(self.s_geodesic_transitive):
            if not self.s_geodesic_transitive[s]:
                break
            best = s
        return best


def transitivity_verdict(g: HGraph, stab: StabilizerResult | None = None) -> TransitivityVerdict:
    stab = _root_stabilizer(g, stab)
    diam = len(bfs_levels(g, stab.root)) - 1
    res = is_s_geodesic_transitive(g, diam, stab)
    flags = {s: s <= res.max_transitive for s in range(1, diam + 1)}
    fail = res.failing_length
    witness = res.orbits[fail].representatives if fail else []
    return TransitivityVerdict(is_arc_transitive(g, stab), flags, res.transitive, diam, witness)


def geodesic_graph_for(n: int, k: int) -> HGraph:
    """The graph the geodesic claims are about: H(n,k) for odd k, the even component for even k."""
    from .hgraph import Component, GraphParams, build_graph

    comp = Component.EVEN if k % 2 == 0 else Component.WHOLE
    return build_graph(GraphParams(n, k, comp))


def nested_chain_violations(path: tuple[int, ...], n: int) -> list[str]:
    """Check a maximal geodesic from the empty set in H''(n, n-1) against the alternating
    A/B structure: |A_i| = 2(i-1), |B_i| = n-1-2(i-1), A increasing, B decreasing,
    |A_i & B_(i-1)| = 1 and A_i & B_i empty."""
    a_sets = list(path[0::2])
    b_sets = list(path[1::2])
    problems = []
    for i, a in enumerate(a_sets):
        if a.bit_count() != 2 * i:
            problems.append(f"|A_{i + 1}| = {a.bit_count()}, expected {2 * i}")
    for i, b in enumerate(b_sets):
        if b.bit_count() != n - 1 - 2 * i:
            problems.append(f"|B_{i + 1}| = {b.bit_count()}, expected {n - 1 - 2 * i}")
    for i in range(len(a_sets) - 1):
        if a_sets[i] & ~a_sets[i + 1]:
            problems.append(f"A_{i + 1} not inside A_{i + 2}")
    for i in range(len(b_sets) - 1):
        if b_sets[i + 1] & ~b_sets[i]:
            problems.append(f"B_{i + 2} not inside B_{i + 1}")
    for i in range(1, len(a_sets)):
        if (a_sets[i] & b_sets[i - 1]).bit_count() != 1:
            problems.append(f"|A_{i + 1} & B_{i}| != 1")
    for i in range(min(len(a_sets), len(b_sets))):
        if a_sets[i] & b_sets[i]:
            problems.append(f"A_{i + 1} meets B_{i + 1}")
    return problems
