"""The graphs H(n, k) and their parity components.

Vertices are subsets of [n] (encoded as ints), and X ~ Y exactly when
|X xor Y| = k.  For even k the graph splits into the odd-size and even-size
subsets; ``Component.ODD`` / ``Component.EVEN`` select one of them.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .subsets import UsageError, check_n, format_bits, full_mask, subset_masks_of_size

TABLE_MAX_N = 12
_CHUNK = 1 << 22


class TheoremViolation(RuntimeError):
    """An exhaustive check contradicted a statement that should hold by construction."""


class Component(str, enum.Enum):
    WHOLE = "whole"
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class GraphParams:
    n: int
    k: int
    component: Component = Component.WHOLE

    def __post_init__(self) -> None:
        check_n(self.n)
        if not 0 <= self.k <= self.n:
            raise UsageError(f"edge weight must satisfy 0 <= k <= n, got k={self.k}, n={self.n}")
        object.__setattr__(self, "component", Component(self.component))
        if self.component is not Component.WHOLE and self.k % 2:
            raise UsageError(
                f"parity components only exist for even k; H({self.n},{self.k}) is connected"
            )

    @property
    def label(self) -> str:
        prefix = {Component.WHOLE: "H", Component.ODD: "H'", Component.EVEN: "H''"}[self.component]
        return f"{prefix}({self.n},{self.k})"


class HGraph:
    """H(n, k) or one of its parity components. Immutable after construction."""

    def __init__(self, params: GraphParams):
        self.params = params
        n, k = params.n, params.k
        every = np.arange(1 << n, dtype=np.int64)
        if params.component is Component.WHOLE:
            verts = every
        else:
            parity = np.array([bin(v).count("1") & 1 for v in range(1 << n)], dtype=bool)
            verts = every[parity] if params.component is Component.ODD else every[~parity]
        self.vertices: np.ndarray = verts
        self.vertices.setflags(write=False)
        index = np.full(1 << n, -1, dtype=np.int64)
        index[verts] = np.arange(len(verts))
        index.setflags(write=False)
        self.index: np.ndarray = index
        # k = 0 would make every vertex its own neighbour; H(n, 0) has no edges.
        masks = subset_masks_of_size(n, k) if k > 0 else []
        self.edge_masks: np.ndarray = np.array(masks, dtype=np.int64)
        self.edge_masks.setflags(write=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def component(self) -> Component:
        return self.params.component

    def __repr__(self) -> str:
        return f"HGraph({self.params.label})"

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.edge_masks)

    @property
    def num_edges(self) -> int:
        return self.num_vertices * self.degree // 2

    def contains(self, x: int) -> bool:
        return 0 <= x < (1 << self.n) and self.index[x] >= 0

    def require_vertex(self, x: int) -> None:
        if not self.contains(x):
            raise UsageError(f"{format_bits(x)} is not a vertex of {self.params.label}")

    def adjacent(self, x: int, y: int) -> bool:
        return self.k > 0 and (x ^ y).bit_count() == self.k

    def neighbors(self, x: int) -> np.ndarray:
        return np.sort(x ^ self.edge_masks)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """Row ``i`` lists the neighbour encodings of ``vertices[i]``, ascending."""
        if self.n > TABLE_MAX_N:
            raise UsageError(f"neighbour tables are only built for n <= {TABLE_MAX_N}")
        table = np.sort(self.vertices[:, None] ^ self.edge_masks[None, :], axis=1)
        table.setflags(write=False)
        return table

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency indexed by vertex position."""
        if self.num_vertices > 4096:
            raise UsageError("dense adjacency is limited to 4096 vertices")
        diff = self.vertices[:, None] ^ self.vertices[None, :]
        weights = _popcount_array(diff)
        adj = weights == self.k if self.k > 0 else np.zeros_like(weights, dtype=bool)
        adj.setflags(write=False)
        return adj

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once as ``(x, y)`` with ``x < y``, in lexicographic order."""
        if self.degree == 0:
            return
        for x in self.vertices.tolist():
            ys = self.neighbors(x)
            for y in ys[ys > x].tolist():
                yield x, y

    def check_adjacency_consistency(self) -> None:
        """Cross-check the neighbour table against the popcount rule and the dense matrix."""
        table = self.neighbor_table
        if table.size:
            weights = _popcount_array(table ^ self.vertices[:, None])
            if not np.all(weights == self.k) or not np.all(self.index[table] >= 0):
                raise TheoremViolation("neighbour table disagrees with the popcount rule")
        if self.num_vertices <= 4096:
            adj = self.adjacency_matrix
            if not np.array_equal(adj.sum(axis=1), np.full(self.num_vertices, self.degree)):
                raise TheoremViolation("dense adjacency has the wrong degrees")
            rows = np.repeat(np.arange(self.num_vertices), self.degree)
            if table.size and not adj[rows, self.index[table].ravel()].all():
                raise TheoremViolation("dense adjacency misses a table edge")


def _popcount_array(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return out


def build_graph(params: GraphParams | None = None, *, n: int | None = None, k: int | None = None,
                component: Component | str = Component.WHOLE) -> HGraph:
    if params is None:
        if n is None or k is None:
            raise UsageError("build_graph needs params or both n and k")
        params = GraphParams(n, k, Component(component))
    return HGraph(params)


def default_root(g: HGraph) -> int:
    """The empty set when it is a vertex, else the smallest vertex ({1} for the odd component)."""
    return 0 if g.contains(0) else int(g.vertices[0])


# --- breadth-first search -----------------------------------------------------


def bfs_levels(g: HGraph, source: int) -> list[np.ndarray]:
    """Distance layers from ``source`` as sorted arrays of encodings."""
    g.require_vertex(source)
    seen = np.zeros(1 << g.n, dtype=bool)
    seen[source] = True
    levels = [np.array([source], dtype=np.int64)]
    if g.degree == 0:
        return levels
    step = max(1, _CHUNK // g.degree)
    while True:
        frontier = levels[-1]
        found = []
        for start in range(0, len(frontier), step):
            block = (frontier[start:start + step, None] ^ g.edge_masks[None, :]).ravel()
            block = np.unique(block)
            block = block[~seen[block]]
            seen[block] = True
            found.append(block)
        nxt = np.unique(np.concatenate(found))
        if len(nxt) == 0:
            return levels
        levels.append(nxt)


@dataclass(frozen=True)
class DistanceClasses:
    source: int
    classes: tuple[np.ndarray, ...]

    @property
    def eccentricity(self) -> int:
        return len(self.classes) - 1

    def as_sets(self) -> list[set[int]]:
        return [set(c.tolist()) for c in self.classes]

    def distance_of(self) -> dict[int, int]:
        return {int(v): i for i, c in enumerate(self.classes) for v in c}


def distance_classes(g: HGraph, source: int) -> DistanceClasses:
    return DistanceClasses(source, tuple(bfs_levels(g, source)))


def connected_components(g: HGraph) -> list[np.ndarray]:
    """Vertex sets of the connected components, ordered by smallest member."""
    remaining = np.ones(1 << g.n, dtype=bool)
    remaining[g.index < 0] = False
    comps = []
    for v in g.vertices.tolist():
        if not remaining[v]:
            continue
        comp = np.sort(np.concatenate(bfs_levels(g, v)))
        remaining[comp] = False
        comps.append(comp)
    return comps


def is_connected(g: HGraph) -> bool:
    reached = sum(len(level) for level in bfs_levels(g, int(g.vertices[0])))
    return reached == g.num_vertices


def diameter(g: HGraph, *, exhaustive: bool = False) -> int:
    """BFS diameter of a connected graph.

    Translations by subsets in the vertex set (all subsets, or the even ones on a
    component) act transitively, so one eccentricity is the diameter.  Pass
    ``exhaustive=True`` to take the max over every source instead.
    """
    root = default_root(g)
    levels = bfs_levels(g, root)
    if sum(len(level) for level in levels) != g.num_vertices:
        raise UsageError(
            f"{g.params.label} is disconnected; take the diameter of a component "
            "(component='even' or 'odd')"
        )
    if not exhaustive:
        return len(levels) - 1
    return max(len(bfs_levels(g, int(v))) - 1 for v in g.vertices)


@dataclass(frozen=True)
class DiameterPrediction:
    value: int | None
    case: str


def predicted_diameter(n: int, k: int) -> DiameterPrediction:
    """Closed-form diameter (of the graph, or of each component for even k) where one is known."""
    if not 1 <= k <= n - 1:
        return DiameterPrediction(None, "not covered: degenerate k")
    if k % 2:
        if n >= 2 * k - 1:
            return DiameterPrediction(math.ceil((n - 1) / k) + 1, "odd k, n >= 2k-1")
        return DiameterPrediction(math.ceil((n - 1) / (n - k)) + 1, "odd k, n <= 2k-2")
    if k == 2:
        return DiameterPrediction(n // 2, "k = 2, per component")
    if k == n - 1:
        return DiameterPrediction((n - 1) // 2, "k = n-1 even, per component")
    return DiameterPrediction(None, "not covered")


# --- vertex maps and isomorphism witnesses -----------------------------------


@dataclass(frozen=True)
class VertexMap:
    """A map on vertex encodings: ``domain[i] -> images[i]``; ``domain`` is ascending."""

    n: int
    domain: np.ndarray
    images: np.ndarray

    @classmethod
    def from_function(cls, g: HGraph, fn) -> VertexMap:
        return cls(g.n, g.vertices, np.array([fn(int(v)) for v in g.vertices], dtype=np.int64))

    @classmethod
    def identity(cls, g: HGraph) -> VertexMap:
        return cls(g.n, g.vertices, g.vertices.copy())

    def __call__(self, x: int) -> int:
        i = int(np.searchsorted(self.domain, x))
        if i >= len(self.domain) or self.domain[i] != x:
            raise UsageError(f"{format_bits(x)} is outside the map's domain")
        return int(self.images[i])

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain.tolist(), self.images.tolist()))

    def key(self) -> bytes:
        return self.images.astype(np.int64).tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexMap):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.domain, other.domain)
                and np.array_equal(self.images, other.images))

    def __hash__(self) -> int:
        return hash((self.n, self.key()))

    def is_bijection(self) -> bool:
        return np.array_equal(np.sort(self.images), self.domain)

    def compose(self, inner: VertexMap) -> VertexMap:
        """``self ∘ inner``: apply ``inner`` first."""
        pos = np.searchsorted(self.domain, inner.images)
        if np.any(pos >= len(self.domain)) or not np.array_equal(self.domain[pos], inner.images):
            raise UsageError("composition leaves the domain")
        return VertexMap(self.n, inner.domain, self.images[pos])

    def inverse(self) -> VertexMap:
        order = np.argsort(self.images)
        return VertexMap(self.n, self.images[order], self.domain[order])


@dataclass(frozen=True)
class IsomorphismWitness:
    source: GraphParams
    target: GraphParams
    mapping: VertexMap
    edges_checked: int
    description: str = field(default="")


def _check_isomorphism(src: HGraph, dst: HGraph, fn) -> tuple[VertexMap, int]:
    images = np.array([fn(int(v)) for v in src.vertices], dtype=np.int64)
    if not np.array_equal(np.sort(images), dst.vertices):
        raise TheoremViolation(f"witness map {src.params.label} -> {dst.params.label} is not a bijection")
    if src.num_edges != dst.num_edges:
        raise TheoremViolation("edge counts differ")
    checked = 0
    for x, y in src.edges():
        if not dst.adjacent(fn(x), fn(y)):
            raise TheoremViolation(
                f"edge {format_bits(x)}-{format_bits(y)} of {src.params.label} is not preserved"
            )
        checked += 1
    return VertexMap(src.n, src.vertices, images), checked


def parity_isomorphism_check(n: int, k: int, translator: int = 1) -> IsomorphismWitness:
    """Verify that translating by a fixed odd set maps H'(n,k) onto H''(n,k)."""
    if k % 2:
        raise UsageError("the parity isomorphism needs even k")
    if translator.bit_count() % 2 == 0 or translator >> n:
        raise UsageError("the translator must be an odd subset of [n]")
    src = build_graph(GraphParams(n, k, Component.ODD))
    dst = build_graph(GraphParams(n, k, Component.EVEN))
    mapping, checked = _check_isomorphism(src, dst, lambda x: x ^ translator)
    return IsomorphismWitness(src.params, dst.params, mapping, checked,
                              f"Y -> {format_bits(translator)} xor Y")


def complement_isomorphism_check(n: int, k: int) -> IsomorphismWitness:
    """Verify that X -> X (|X| even), X -> X^c (|X| odd) is an isomorphism H(n,k) -> H(n,n-k)."""
    if n % 2 or k % 2 == 0:
        raise UsageError("the complement isomorphism needs n even and k odd")
    if not 0 <= k <= n:
        raise UsageError("k out of range")
    full = full_mask(n)
    src = build_graph(GraphParams(n, k))
    dst = build_graph(GraphParams(n, n - k))
    mapping, checked = _check_isomorphism(
        src, dst, lambda x: x ^ full if x.bit_count() % 2 else x)
    return IsomorphismWitness(src.params, dst.params, mapping, checked,
                              "X -> X if |X| even, X^c if |X| odd")


# --- export -------------------------------------------------------------------


def to_json_dict(g: HGraph) -> dict:
    """Vertices and edge endpoints are subset encodings; each edge once with i < j."""
    return {
        "n": g.n,
        "k": g.k,
        "component": g.component.value,
        "vertices": g.vertices.tolist(),
        "edges": [[x, y] for x, y in g.edges()],
    }


def to_json(g: HGraph) -> str:
    return json.dumps(to_json_dict(g), separators=(",", ":"))


def to_dot(g: HGraph) -> str:
    name = {Component.WHOLE: "H", Component.ODD: "Hodd", Component.EVEN: "Heven"}[g.component]
    lines = [f"graph {name}_{g.n}_{g.k} {{"]
    for v in g.vertices.tolist():
        lines.append(f'  v{v} [label="{format_bits(v)}"];')
    for x, y in g.edges():
        lines.append(f"  v{x} -- v{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def vertex_list(vertices: Sequence[int]) -> list[str]:
    return [format_bits(int(v)) for v in vertices]
