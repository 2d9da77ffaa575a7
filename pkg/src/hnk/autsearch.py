"""Brute-force automorphism search for small H(n, k).

Nothing here uses the explicit constructions; the search only sees the graph.
Its answers are what the constructions get checked against.

The search individualises the root, refines colours by neighbour counts to a
fixpoint, then walks a base of vertices: at each level one more source vertex is
individualised and every image candidate in the matching cell is tried, refining
source and image colourings side by side and pruning on any mismatch.  Leaves are
discrete colourings and are checked against the full adjacency matrix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .hgraph import Component, HGraph, VertexMap, bfs_levels, default_root
from .subsets import UsageError, format_bits, full_mask
from .symmetries import (Family, Permutation, SymmetryElement, all_permutations,
                         family_table, known_families)

HARD_CAP = 256
MATERIALIZE_CAP = 1_000_000


def size_cap() -> int:
    """Vertex cap for exhaustive searches; ``HNK_SIZE_CAP`` may lower it, never raise it."""
    raw = os.environ.get("HNK_SIZE_CAP")
    if not raw:
        return HARD_CAP
    try:
        return max(1, min(HARD_CAP, int(raw)))
    except ValueError:
        return HARD_CAP


class SizeCapExceeded(UsageError):
    pass


def _require_cap(g: HGraph) -> None:
    cap = size_cap()
    if g.num_vertices > cap:
        raise SizeCapExceeded(
            f"{g.params.label} has {g.num_vertices} vertices; exhaustive search is limited to {cap}"
        )


def root_distance_colors(g: HGraph, root: int) -> np.ndarray:
    """Distance from ``root`` per vertex position; -1 outside root's component."""
    colors = np.full(g.num_vertices, -1, dtype=np.int64)
    for d, level in enumerate(bfs_levels(g, root)):
        colors[g.index[level]] = d
    return colors


def _counts(adj: np.ndarray, colors: np.ndarray, ncol: int) -> np.ndarray:
    onehot = np.zeros((len(colors), ncol), dtype=np.float32)
    onehot[np.arange(len(colors)), colors] = 1.0
    return (adj @ onehot).astype(np.int64)


def refine_colors(adj: np.ndarray, initial: np.ndarray) -> np.ndarray:
    """Iterate colour -> (colour, neighbour counts per colour) to a fixpoint.

    Colours are renumbered in sorted signature order each round, so the result only
    depends on graph structure and the initial colouring.
    """
    colors = np.unique(initial, return_inverse=True)[1].ravel()
    a = adj.astype(np.float32)
    while True:
        ncol = int(colors.max()) + 1
        sig = np.concatenate([colors[:, None], _counts(a, colors, ncol)], axis=1)
        new = np.unique(sig, axis=0, return_inverse=True)[1].ravel()
        if new.max() + 1 == ncol:
            return new
        colors = new


@dataclass
class StabilizerResult:
    """Automorphisms fixing ``root``; ``table[i]`` lists the image encodings of ``vertices``."""

    graph: HGraph
    root: int
    order: int
    table: np.ndarray | None
    invariant_signature: tuple[int, ...]
    base: tuple[int, ...]
    generators: np.ndarray | None = None  # position permutations generating the group

    @property
    def materialized(self) -> bool:
        return self.table is not None

    @property
    def elements(self) -> list[VertexMap]:
        if self.table is None:
            raise UsageError("stabilizer was counted but not materialized (too large)")
        dom = self.graph.vertices
        return [VertexMap(self.graph.n, dom, row) for row in self.table]

    def index_table(self) -> np.ndarray:
        """Same as ``table`` but holding vertex positions instead of encodings."""
        if self.table is None:
            raise UsageError("stabilizer not materialized")
        return self.graph.index[self.table]


class _Search:
    """Individualisation-refinement over images of a fixed base, root fixed.

    ``levels[j]`` is the refined colouring after individualising ``base[:j+1]``;
    the last one is discrete, so a full assignment of base images pins the map.
    """

    def __init__(self, g: HGraph, root: int, reverse: bool = False):
        _require_cap(g)
        g.require_vertex(root)
        self.g = g
        self.reverse = reverse
        self.adj = g.adjacency_matrix
        self.adj_f = self.adj.astype(np.float32)
        self.root_pos = int(g.index[root])
        initial = root_distance_colors(g, root)
        initial[self.root_pos] = -2
        self.initial = refine_colors(self.adj, initial)
        self.base, self.levels = self._choose_base()

    def _refine_pair(self, cs: np.ndarray, ci: np.ndarray):
        while True:
            ncol = int(cs.max()) + 1
            sig_s = np.concatenate([cs[:, None], _counts(self.adj_f, cs, ncol)], axis=1)
            sig_i = np.concatenate([ci[:, None], _counts(self.adj_f, ci, ncol)], axis=1)
            us, inv_s, cnt_s = np.unique(sig_s, axis=0, return_inverse=True, return_counts=True)
            ui, inv_i, cnt_i = np.unique(sig_i, axis=0, return_inverse=True, return_counts=True)
            if us.shape != ui.shape or not np.array_equal(us, ui) or not np.array_equal(cnt_s, cnt_i):
                return None
            if len(us) == ncol:
                return cs, ci
            cs, ci = inv_s.ravel(), inv_i.ravel()

    @staticmethod
    def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
        out = colors.copy()
        out[v] = colors.max() + 1
        return out

    def _choose_base(self) -> tuple[list[int], list[np.ndarray]]:
        base, levels = [self.root_pos], [self.initial]
        cur = self.initial
        while cur.max() + 1 < len(cur):
            sizes = np.bincount(cur)
            cell = int(np.flatnonzero(sizes == sizes[sizes > 1].min())[0])
            v = int(np.flatnonzero(cur == cell)[0])
            ind = self._individualize(cur, v)
            cur = self._refine_pair(ind, ind)[0]
            base.append(v)
            levels.append(cur)
        return base, levels

    def _candidates(self, level: int, q: np.ndarray) -> np.ndarray:
        """Images allowed for ``base[level + 1]`` given the image colouring at ``level``."""
        b = self.base[level + 1]
        cands = np.flatnonzero(q == self.levels[level][b])
        return cands[::-1] if self.reverse else cands

    def _step(self, level: int, q: np.ndarray, c: int) -> np.ndarray | None:
        b = self.base[level + 1]
        pair = self._refine_pair(self._individualize(self.levels[level], b),
                                 self._individualize(q, c))
        return None if pair is None else pair[1]

    def _leaf(self, q: np.ndarray) -> np.ndarray | None:
        perm = np.argsort(q)[self.levels[-1]]
        if not np.array_equal(self.adj[np.ix_(perm, perm)], self.adj):
            return None
        return perm

    def _dfs(self, level: int, q: np.ndarray) -> Iterator[np.ndarray]:
        if level == len(self.base) - 1:
            perm = self._leaf(q)
            if perm is not None:
                yield perm
            return
        for c in self._candidates(level, q).tolist():
            nq = self._step(level, q, c)
            if nq is not None:
                yield from self._dfs(level + 1, nq)

    def iter_perms(self) -> Iterator[np.ndarray]:
        """Every automorphism fixing the root, as a position permutation, by full backtracking."""
        yield from self._dfs(0, self.levels[0])

    def _find(self, level: int, c: int) -> np.ndarray | None:
        """An automorphism fixing base[:level+1] pointwise and sending base[level+1] to c."""
        nq = self._step(level, self.levels[level], c)
        if nq is None:
            return None
        return next(self._dfs(level + 1, nq), None)

    def transversals(self) -> list[np.ndarray]:
        """Per level i >= 1, maps sending base[i] to each point of its orbit under the
        pointwise stabilizer of base[:i] (first row: the identity)."""
        v = len(self.adj)
        ident = np.arange(v)
        out = []
        for level in range(len(self.base) - 1):
            b = self.base[level + 1]
            cands = self._candidates(level, self.levels[level])
            gens: list[np.ndarray] = []
            reps = {b: ident}
            for c in sorted(cands.tolist(), reverse=self.reverse):
                if c in reps:
                    continue
                found = self._find(level, c)
                if found is None:
                    continue
                gens.append(found)
                queue = list(reps)
                while queue:
                    p = queue.pop()
                    for gen in gens:
                        q = int(gen[p])
                        if q not in reps:
                            reps[q] = gen[reps[p]]
                            queue.append(q)
            points = sorted(reps)
            points.remove(b)
            out.append(np.array([reps[b]] + [reps[p] for p in points], dtype=np.int64))
        return out


def _products(transversals: list[np.ndarray], v: int) -> np.ndarray:
    elems = np.arange(v, dtype=np.int64)[None, :]
    for t in reversed(transversals):
        elems = t[:, elems].reshape(-1, v)
    return elems


def stabilizer(g: HGraph, root: int | None = None, *, reverse: bool = False,
               materialize: bool = True) -> StabilizerResult:
    """All automorphisms of ``g`` fixing ``root`` (the empty set by default).

    The order is the product of the basic-orbit lengths along the search base; the
    elements are the products of one transversal per level.  Above
    ``MATERIALIZE_CAP`` only the order is returned.
    """
    _require_cap(g)
    root = default_root(g) if root is None else root
    search = _Search(g, root, reverse)
    trans = search.transversals()
    order = 1
    for t in trans:
        order *= len(t)
    table = None
    if materialize and order <= MATERIALIZE_CAP:
        pos = _products(trans, g.num_vertices)
        table = g.vertices[pos]
        table = table[np.lexsort(table.T[::-1])]
    gens = np.concatenate([t[1:] for t in trans] + [np.arange(g.num_vertices)[None, :]])
    return StabilizerResult(g, root, order, table, tuple(search.initial.tolist()),
                            tuple(int(g.vertices[b]) for b in search.base), gens)


def enumerate_stabilizer(g: HGraph, root: int | None = None, *, reverse: bool = False) -> np.ndarray:
    """Independent route: every leaf of the full backtracking tree, sorted (encodings)."""
    _require_cap(g)
    root = default_root(g) if root is None else root
    search = _Search(g, root, reverse)
    perms = list(search.iter_perms())
    table = g.vertices[np.array(perms, dtype=np.int64).reshape(len(perms), g.num_vertices)]
    return table[np.lexsort(table.T[::-1])]


def stabilizer_of_empty(g: HGraph, *, reverse: bool = False, materialize: bool = True) -> StabilizerResult:
    if not g.contains(0):
        raise UsageError(f"the empty set is not a vertex of {g.params.label}")
    return stabilizer(g, 0, reverse=reverse, materialize=materialize)


def iter_stabilizer(g: HGraph, root: int | None = None, *, reverse: bool = False) -> Iterator[VertexMap]:
    """Lazily enumerate the stabilizer; useful for finding single witnesses in huge groups."""
    root = default_root(g) if root is None else root
    search = _Search(g, root, reverse)
    for perm in search.iter_perms():
        yield VertexMap(g.n, g.vertices, g.vertices[perm])


def translations_transitive(g: HGraph, root: int | None = None) -> bool:
    """Check that the translations X -> X xor (root xor v) are automorphisms reaching every v."""
    root = default_root(g) if root is None else root
    adj = g.adjacency_matrix
    for v in g.vertices.tolist():
        shift = root ^ v
        pos = g.index[g.vertices ^ shift]
        if np.any(pos < 0) or not np.array_equal(adj[np.ix_(pos, pos)], adj):
            return False
    return True


def aut_order(g: HGraph, *, result: StabilizerResult | None = None) -> int:
    """|Aut(g)| = |orbit of root| * |stabilizer of root|, the orbit being realised by translations."""
    _require_cap(g)
    if not translations_transitive(g):
        raise AssertionError(f"translations do not act transitively on {g.params.label}")
    if result is None:
        result = stabilizer(g, materialize=False)
    return g.num_vertices * result.order


# --- matching search output against the explicit constructions ---------------


def _single_element(bits: int) -> int:
    return bits.bit_length()


def _decompose_whole(images: dict[int, int], n: int, k: int) -> SymmetryElement | None:
    x = images[0]
    res = {y: x ^ img for y, img in images.items()}
    full = full_mask(n)
    singles = [res[1 << i] for i in range(n)]
    sizes = [s.bit_count() for s in singles]
    fams = known_families(n, k)
    cand: SymmetryElement | None = None
    if all(s == 1 for s in sizes):
        perm = Permutation([_single_element(s) for s in singles])
        cand = SymmetryElement(n, x, perm, Family.PLAIN)
    elif Family.EXT_A in fams and sizes.count(n) == 1 and sizes.count(1) == n - 1:
        t = sizes.index(n) + 1
        table = [0] * (n + 1)
        for i in range(1, n + 1):
            if i != t:
                table[i - 1] = _single_element(singles[i - 1])
        table[t - 1] = n + 1
        table[n] = (set(range(1, n + 1)) - set(table)).pop()
        cand = SymmetryElement(n, x, Permutation(table), Family.EXT_A)
    elif Family.EXT_B in fams and sizes.count(1) == 1 and sizes.count(n - 2) == n - 1:
        t = sizes.index(1) + 1
        t_img = _single_element(singles[t - 1])
        table = [0] * (n + 1)
        for i in range(1, n + 1):
            if i == t:
                continue
            missing = full ^ singles[i - 1]
            if not missing >> (t_img - 1) & 1:
                return None
            table[i - 1] = _single_element(missing ^ (1 << (t_img - 1)))
        table[t - 1] = n + 1
        table[n] = t_img
        if sorted(table) != list(range(1, n + 2)):
            return None
        cand = SymmetryElement(n, x, Permutation(table), Family.EXT_B)
    if cand is None:
        return None
    if any(cand(y) != img for y, img in images.items()):
        return None
    return cand


def _decompose_even_component(images: dict[int, int], n: int) -> SymmetryElement | None:
    if n < 3:
        return None
    x = images[0]
    res = {y: x ^ img for y, img in images.items()}
    table = []
    for i in range(n):
        common = full_mask(n)
        for j in range(n):
            if j != i:
                img = res[(1 << i) | (1 << j)]
                if img.bit_count() != 2:
                    return None
                common &= img
        if common.bit_count() != 1:
            return None
        table.append(_single_element(common))
    if sorted(table) != list(range(1, n + 1)):
        return None
    cand = SymmetryElement(n, x, Permutation(table), Family.PLAIN)
    if any(cand(y) != img for y, img in images.items()):
        return None
    return cand


def decompose_known(mapping: VertexMap, n: int, k: int) -> SymmetryElement | None:
    """Write an automorphism as translation . (plain | f_sigma | f^sigma), or return ``None``.

    ``None`` means the map lies outside the group claimed to be Aut(H(n,k)) for this
    (n, k).  Maps on a parity component are matched against translations by even sets
    composed with plain permutations.
    """
    images = mapping.as_dict()
    if len(images) == 1 << n:
        return _decompose_whole(images, n, k)
    if len(images) != 1 << (n - 1):
        raise UsageError("map is defined neither on all subsets nor on a parity class")
    if 0 in images:
        return _decompose_even_component(images, n)
    # Odd component: conjugate by the translation by {1} onto the even component.
    conj = {y ^ 1: img ^ 1 for y, img in images.items()}
    inner = _decompose_even_component(conj, n)
    if inner is None:
        return None
    shift = 1 ^ inner.translation ^ inner.linear_part(1)
    cand = SymmetryElement(n, shift, inner.perm, Family.PLAIN)
    if any(cand(y) != img for y, img in images.items()):
        return None
    return cand


def known_stabilizer_tables(g: HGraph) -> np.ndarray:
    """Distinct maps fixing the root that the constructions provide, restricted to g.

    Whole graphs: the family maps of every permutation in S_n (and S_{n+1} for the
    extended families that apply).  Components: plain permutations only.
    """
    n, k = g.n, g.k
    fams = known_families(n, k) if g.component is Component.WHOLE else (Family.PLAIN,)
    rows = []
    for p in all_permutations(n):
        rows.append(family_table(Family.PLAIN, p, n))
    for fam in fams:
        if fam is Family.PLAIN:
            continue
        for p in all_permutations(n + 1):
            if p(n + 1) != n + 1:
                rows.append(family_table(fam, p, n))
    table = np.array(rows, dtype=np.int64)[:, g.vertices]
    if g.component is Component.ODD:
        root = default_root(g)
        table = table ^ (root ^ table[:, [int(g.index[root])]])
    return np.unique(table, axis=0)


@dataclass(frozen=True)
class VerificationEntry:
    n: int
    k: int
    component: str
    oracle_order: int
    predicted_order: int | None
    agrees: bool | None
    stabilizer_order: int
    elements_outside_known_group: int
    case_tag: str = ""

    def to_json_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "component": self.component,
            "oracle_order": self.oracle_order, "predicted_order": self.predicted_order,
            "agrees": self.agrees, "stabilizer_order": self.stabilizer_order,
            "elements_outside_known_group": self.elements_outside_known_group,
        }


def verification_entry(g: HGraph) -> VerificationEntry:
    """Compare the oracle order of g with the claimed one and count unexplained stabilizer elements."""
    from .symmetries import check_automorphism, predicted_aut_order

    pred = predicted_aut_order(g.n, g.k)
    result = stabilizer(g, materialize=False)
    order = aut_order(g, result=result)
    predicted = pred.value if g.component is Component.WHOLE else pred.component_value
    agrees = None if predicted is None else predicted == order
    known = known_stabilizer_tables(g)
    for row in known:
        if not check_automorphism(VertexMap(g.n, g.vertices, row), g):
            raise AssertionError(f"a constructed map is not an automorphism of {g.params.label}")
    outside = result.order - len(known)
    if outside < 0:
        raise AssertionError("constructed stabilizer larger than the searched one")
    return VerificationEntry(g.n, g.k, g.component.value, order, predicted, agrees,
                             result.order, outside, pred.case_tag)


def find_unexplained(g: HGraph, limit: int = 200_000) -> VertexMap | None:
    """First stabilizer element (in search order) that ``decompose_known`` cannot explain."""
    for i, m in enumerate(iter_stabilizer(g)):
        if i >= limit:
            return None
        if decompose_known(m, g.n, g.k) is None:
            return m
    return None


def describe_map(m: VertexMap, limit: int = 8) -> str:
    moved = [(int(a), int(b)) for a, b in zip(m.domain, m.images) if a != b][:limit]
    return ", ".join(f"{format_bits(a)}->{format_bits(b)}" for a, b in moved)
