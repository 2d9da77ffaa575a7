"""Explicit automorphisms of H(n, k).

Every structured symmetry acts as ``Y -> X xor f(Y)`` where ``X`` is a fixed
translation and ``f`` is one of

* ``plain``: a permutation of [n] applied element-wise,
* ``extA``:  the map f_sigma built from sigma in S_{n+1} (automorphism when n = 2k-1),
* ``extB``:  the four-case map f^sigma built from sigma in S_{n+1}
  (automorphism when n = 2k+1 with k odd, k >= 3).

All maps here are GF(2)-linear on characteristic vectors, which is what makes
the translation-first normal form closed under composition.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .hgraph import HGraph, VertexMap
from .subsets import UsageError, format_bits, full_mask


class Permutation:
    """A permutation of {1, ..., m} stored as its image table."""

    __slots__ = ("images", "_zero")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise UsageError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images
        self._zero = tuple(i - 1 for i in images)

    @classmethod
    def identity(cls, m: int) -> Permutation:
        return cls(range(1, m + 1))

    @classmethod
    def from_cycles(cls, m: int, *cycles: Sequence[int]) -> Permutation:
        table = list(range(1, m + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                table[a - 1] = b
        return cls(table)

    @classmethod
    def transposition(cls, m: int, a: int, b: int) -> Permutation:
        return cls.from_cycles(m, (a, b))

    @classmethod
    def random(cls, m: int, rng: random.Random) -> Permutation:
        table = list(range(1, m + 1))
        rng.shuffle(table)
        return cls(table)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __mul__(self, other: Permutation) -> Permutation:
        """``self * other`` is ``self ∘ other``: apply ``other`` first."""
        if self.size != other.size:
            raise UsageError("permutations act on different domains")
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images, start=1))

    def lift(self) -> Permutation:
        """Extend to one more point, fixing it."""
        return Permutation(self.images + (self.size + 1,))

    def restrict(self) -> Permutation:
        if self.images[-1] != self.size:
            raise UsageError("only permutations fixing the last point restrict")
        return Permutation(self.images[:-1])

    def apply_bits(self, bits: int) -> int:
        """Image of a subset of {1..m} given as a bit mask."""
        out = 0
        for i, img in enumerate(self._zero):
            if bits >> i & 1:
                out |= 1 << img
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.size + 1):
            if start in seen or self(start) == start:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"


def all_permutations(m: int) -> Iterator[Permutation]:
    """All of S_m in lexicographic order of image tables."""
    for images in permutations(range(1, m + 1)):
        yield Permutation(images)


def _check_ext(sigma: Permutation, n: int) -> None:
    if sigma.size != n + 1:
        raise UsageError(f"expected a permutation of 1..{n + 1}, got one of 1..{sigma.size}")


def _check_x(x: int, n: int) -> None:
    if x < 0 or x >> n:
        raise UsageError(f"{x:#x} is not a subset of [{n}]")


# --- scalar forms (direct transcriptions of the defining formulas) -----------


def t_sigma(sigma: Permutation, v: int, n: int) -> int:
    """Coordinate i of the output is v[sigma^-1(i)] + v[t] over GF(2), t = sigma^-1(n+1), v[n+1] = 0."""
    _check_ext(sigma, n)
    _check_x(v, n)
    inv = sigma.inverse()

    def coord(j: int) -> int:
        return 0 if j == n + 1 else v >> (j - 1) & 1

    vt = coord(inv(n + 1))
    out = 0
    for i in range(1, n + 1):
        if coord(inv(i)) ^ vt:
            out |= 1 << (i - 1)
    return out


def f_sigma(sigma: Permutation, x: int, n: int) -> int:
    """sigma(X) when t is not in X, otherwise the complement in [n] of sigma(X minus t)."""
    _check_ext(sigma, n)
    _check_x(x, n)
    t = sigma.inverse()(n + 1)
    if t == n + 1 or not x >> (t - 1) & 1:
        return sigma.apply_bits(x)
    return sigma.apply_bits(x & ~(1 << (t - 1))) ^ full_mask(n)


def f_sigma_ext(sigma: Permutation, x: int, n: int) -> int:
    """Four cases on (|X| parity, whether t is in X); sigma itself when sigma fixes n+1."""
    _check_ext(sigma, n)
    _check_x(x, n)
    if sigma(n + 1) == n + 1:
        return sigma.apply_bits(x)
    t = sigma.inverse()(n + 1)
    tbit, extra, full = 1 << (t - 1), 1 << n, full_mask(n)
    t_in = bool(x & tbit)
    if x.bit_count() % 2 == 0:
        out = sigma.apply_bits(x & ~tbit) ^ full if t_in else sigma.apply_bits(x)
    elif t_in:
        out = sigma.apply_bits((x | extra) & ~tbit)
    else:
        out = sigma.apply_bits(x | extra) ^ full
    if out >> n:
        raise AssertionError("f^sigma left [n]")
    return out


def apply_translation(x: int, y: int) -> int:
    return x ^ y


# --- vectorised action tables -------------------------------------------------


def _permute_bits_array(sigma: Permutation, xs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(xs)
    for i, img in enumerate(sigma._zero):
        out |= ((xs >> i) & 1) << img
    return out


def _popparity(xs: np.ndarray) -> np.ndarray:
    p = np.zeros_like(xs)
    y = xs.copy()
    while np.any(y):
        p ^= y & 1
        y >>= 1
    return p


def t_sigma_table(sigma: Permutation, vs: np.ndarray, n: int) -> np.ndarray:
    """Vectorised :func:`t_sigma` over an array of vectors."""
    _check_ext(sigma, n)
    vs = np.asarray(vs, dtype=np.int64)
    t = sigma.inverse()(n + 1)
    vt = (vs >> (t - 1)) & 1 if t <= n else np.zeros_like(vs)
    out = np.zeros_like(vs)
    for j in range(1, n + 1):
        img = sigma(j)
        if img <= n:
            out |= ((vs >> (j - 1)) & 1) << (img - 1)
    mask = np.where(vt == 1, full_mask(n), 0)
    return out ^ mask


class Family(str, enum.Enum):
    PLAIN = "plain"
    EXT_A = "extA"
    EXT_B = "extB"


def family_table(family: Family, sigma: Permutation, n: int) -> np.ndarray:
    """Images of every subset of [n] (indexed by encoding) under the family map of ``sigma``."""
    xs = np.arange(1 << n, dtype=np.int64)
    if family is Family.PLAIN:
        if sigma.size != n:
            raise UsageError("plain symmetries use permutations of [n]")
        return _permute_bits_array(sigma, xs)
    _check_ext(sigma, n)
    full = full_mask(n)
    if sigma(n + 1) == n + 1:
        return _permute_bits_array(sigma, xs)
    t = sigma.inverse()(n + 1)
    tbit = 1 << (t - 1)
    t_in = (xs & tbit) != 0
    if family is Family.EXT_A:
        return np.where(t_in, _permute_bits_array(sigma, xs & ~tbit) ^ full,
                        _permute_bits_array(sigma, xs))
    odd = _popparity(xs) == 1
    extra = 1 << n
    even_out = np.where(t_in, _permute_bits_array(sigma, xs & ~tbit) ^ full,
                        _permute_bits_array(sigma, xs))
    odd_out = np.where(t_in, _permute_bits_array(sigma, (xs | extra) & ~tbit),
                       _permute_bits_array(sigma, xs | extra) ^ full)
    out = np.where(odd, odd_out, even_out)
    if np.any(out >> n):
        raise AssertionError("f^sigma left [n]")
    return out


# --- structured symmetries ----------------------------------------------------


@dataclass(frozen=True)
class SymmetryElement:
    """The automorphism ``Y -> translation xor f(Y)`` with ``f`` given by ``perm`` and ``family``."""

    n: int
    translation: int
    perm: Permutation
    family: Family = Family.PLAIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        _check_x(self.translation, self.n)
        want = self.n if self.family is Family.PLAIN else self.n + 1
        if self.perm.size != want:
            raise UsageError(f"{self.family.value} elements need a permutation of 1..{want}")

    @classmethod
    def identity(cls, n: int) -> SymmetryElement:
        return cls(n, 0, Permutation.identity(n))

    @classmethod
    def translation_by(cls, n: int, x: int) -> SymmetryElement:
        return cls(n, x, Permutation.identity(n))

    def linear_part(self, y: int) -> int:
        if self.family is Family.PLAIN:
            return self.perm.apply_bits(y)
        if self.family is Family.EXT_A:
            return f_sigma(self.perm, y, self.n)
        return f_sigma_ext(self.perm, y, self.n)

    def __call__(self, y: int) -> int:
        return self.translation ^ self.linear_part(y)

    def table(self) -> np.ndarray:
        return self.translation ^ family_table(self.family, self.perm, self.n)

    def vertex_map(self, g: HGraph | None = None) -> VertexMap:
        table = self.table()
        if g is None:
            dom = np.arange(1 << self.n, dtype=np.int64)
            return VertexMap(self.n, dom, table)
        return VertexMap(self.n, g.vertices, table[g.vertices])

    @property
    def extended_perm(self) -> Permutation:
        """The permutation as an element of S_{n+1} (plain perms fix n+1)."""
        return self.perm.lift() if self.family is Family.PLAIN else self.perm

    def to_json_dict(self) -> dict:
        return {"translation": self.translation, "perm": list(self.perm.images),
                "family": self.family.value}

    def __str__(self) -> str:
        return f"rho_{format_bits(self.translation)} . {self.family.value}{self.perm}"


@dataclass(frozen=True)
class DestructuredComposition:
    """Result of composing elements whose linear parts belong to different families."""

    mapping: VertexMap
    destructured: bool = field(default=True)


def compose(a: SymmetryElement, b: SymmetryElement) -> SymmetryElement | DestructuredComposition:
    """``a ∘ b`` in translation-first normal form.

    Since the linear part f_a is additive, ``a(b(Y)) = (X_a xor f_a(X_b)) xor f_a(f_b(Y))``
    and ``f_a ∘ f_b`` is the family map of the product permutation.
    """
    if a.n != b.n:
        raise UsageError("cannot compose symmetries of different ground sets")
    fam = {a.family, b.family} - {Family.PLAIN}
    if len(fam) > 1:
        mapping = a.vertex_map().compose(b.vertex_map())
        return DestructuredComposition(mapping)
    family = fam.pop() if fam else Family.PLAIN
    if family is Family.PLAIN:
        pa, pb = a.perm, b.perm
    else:
        pa, pb = a.extended_perm, b.extended_perm
    return SymmetryElement(a.n, a.translation ^ a.linear_part(b.translation), pa * pb, family)


def inverse(a: SymmetryElement) -> SymmetryElement:
    inv_perm = a.perm.inverse()
    lin = SymmetryElement(a.n, 0, inv_perm, a.family)
    return SymmetryElement(a.n, lin.linear_part(a.translation), inv_perm, a.family)


# --- automorphism verification ------------------------------------------------


@dataclass(frozen=True)
class AutomorphismCheck:
    ok: bool
    reason: str = ""
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_automorphism(mapping: VertexMap | SymmetryElement, g: HGraph) -> AutomorphismCheck:
    """Exhaustive test that ``mapping`` is a bijection of g's vertices preserving adjacency both ways."""
    if isinstance(mapping, SymmetryElement):
        if mapping.n != g.n:
            return AutomorphismCheck(False, "ground-set sizes differ")
        images = mapping.table()[g.vertices]
    else:
        if mapping.n != g.n or not np.array_equal(mapping.domain, g.vertices):
            return AutomorphismCheck(False, "map is not defined on this vertex set")
        images = mapping.images
    pos = g.index[images] if np.all((images >= 0) & (images < (1 << g.n))) else None
    if pos is None or np.any(pos < 0):
        bad = int(g.vertices[np.flatnonzero(pos < 0)[0]]) if pos is not None else -1
        return AutomorphismCheck(False, "image leaves the vertex set", (bad, bad))
    counts = np.bincount(pos, minlength=g.num_vertices)
    if np.any(counts != 1):
        target = int(np.flatnonzero(counts > 1)[0])
        hits = np.flatnonzero(pos == target)[:2]
        return AutomorphismCheck(False, "not injective",
                                 (int(g.vertices[hits[0]]), int(g.vertices[hits[1]])))
    if g.num_vertices <= 4096:
        adj = g.adjacency_matrix
        moved = adj[np.ix_(pos, pos)]
        if not np.array_equal(moved, adj):
            i, j = np.argwhere(moved != adj)[0]
            return AutomorphismCheck(False, "adjacency not preserved",
                                     (int(g.vertices[i]), int(g.vertices[j])))
        return AutomorphismCheck(True)
    # Large graphs: bijection + every edge to an edge suffices (finite, equal edge counts).
    nbr_images = images[g.index[g.neighbor_table]]
    weights = np.vectorize(int.bit_count, otypes=[np.int64])(nbr_images ^ images[:, None])
    if np.any(weights != g.k):
        i, j = np.argwhere(weights != g.k)[0]
        return AutomorphismCheck(False, "adjacency not preserved",
                                 (int(g.vertices[i]), int(g.neighbor_table[i, j])))
    return AutomorphismCheck(True)


def verify_automorphism(mapping: VertexMap | SymmetryElement, g: HGraph) -> bool:
    return check_automorphism(mapping, g).ok


# --- predicted automorphism-group orders -------------------------------------


@dataclass(frozen=True)
class PredictedOrder:
    value: int | None
    case_tag: str
    caveats: tuple[str, ...] = ()
    component_value: int | None = None

    @property
    def known(self) -> bool:
        return self.value is not None


def predicted_aut_order(n: int, k: int) -> PredictedOrder:
    """|Aut(H(n,k))| as claimed for the case (n, k) falls in, or ``None`` when open/degenerate."""
    if not 1 <= n:
        raise UsageError("n must be positive")
    if k in (0, n) or not 0 <= k <= n:
        return PredictedOrder(None, "degenerate k")
    two_n = 2 ** n
    caveats: tuple[str, ...] = ()
    component: int | None = None
    if k % 2 == 0:
        caveats = ("disconnected: two isomorphic components; whole-graph automorphisms "
                   "include component swaps",)
        if n >= 2 * k + 2 or n <= 2 * k - 2:
            component = 2 ** (n - 1) * math.factorial(n)
    if k == 1:
        return PredictedOrder(two_n * math.factorial(n), "k=1 (hypercube)")
    if n == 2 * k:
        return PredictedOrder(None, "open case n=2k", caveats, component)
    if n == 2 * k - 1:
        return PredictedOrder(two_n * math.factorial(n + 1), "n=2k-1: H_n Gamma_{n+1}",
                              caveats, component)
    if n == 2 * k + 1 and k % 2:
        return PredictedOrder(two_n * math.factorial(n + 1), "n=2k+1, k odd: H_n Gamma^{n+1}")
    if n == 2 * k + 1:
        return PredictedOrder(two_n * math.factorial(n), "n=2k+1, k even: H_n S_n",
                              caveats, component)
    tag = "n>=2k+2: H_n S_n" if n >= 2 * k + 2 else "n<=2k-2: H_n S_n"
    return PredictedOrder(two_n * math.factorial(n), tag, caveats, component)


def known_families(n: int, k: int) -> tuple[Family, ...]:
    """Families whose maps belong to the group claimed to be Aut(H(n,k))."""
    fams = [Family.PLAIN]
    if k >= 2 and n == 2 * k - 1:
        fams.append(Family.EXT_A)
    if k % 2 and k >= 3 and n == 2 * k + 1:
        fams.append(Family.EXT_B)
    return tuple(fams)
