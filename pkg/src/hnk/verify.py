"""Exhaustive checks of the structural claims about H(n, k) over a grid of small (n, k).

Each claim is evaluated once per grid point and lands in the report with one of the
statuses ``verified``, ``refuted``, ``unknown`` or ``skipped``.  Order disagreements
on whole graphs with even k are marked ``open_question``; they only fail the run under
``strict``.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .autsearch import (
    SizeCapExceeded,
    decompose_known,
    describe_map,
    find_unexplained,
    size_cap,
    translations_transitive,
    verification_entry,
)
from .counts import (
    Family as SeqFamily,
    applicable_families,
    bruteforce_values,
    literal_odd_layer_value,
    monotonicity_check,
    u_sequence,
)
from .hgraph import (
    Component,
    GraphParams,
    HGraph,
    TheoremViolation,
    bfs_levels,
    build_graph,
    complement_isomorphism_check,
    connected_components,
    diameter,
    parity_isomorphism_check,
    predicted_diameter,
)
from .subsets import UsageError, subset_masks_of_size
from .symmetries import (
    Family,
    Permutation,
    SymmetryElement,
    all_permutations,
    check_automorphism,
    compose,
    family_table,
    known_families,
    t_sigma_table,
)
from .transitivity import (
    Classification,
    classify_geodesic_transitivity,
    geodesic_array,
    geodesic_graph_for,
    is_arc_transitive,
    nested_chain_violations,
    transitivity_verdict,
)

VERIFIED, REFUTED, UNKNOWN, SKIPPED = "verified", "refuted", "unknown", "skipped"

EXHAUSTIVE_PAIRS_LIMIT = 600_000
SAMPLED_PAIRS = 10_000


# --- law checkers shared with the test suite ---------------------------------


def weight_preservation_violations(n: int, k: int) -> tuple[int, int]:
    """(cases checked, violations) of |T_sigma(v)| = k over all sigma in S_(n+1), |v| = k."""
    vs = np.array(subset_masks_of_size(n, k), dtype=np.int64)
    checked = bad = 0
    for sigma in all_permutations(n + 1):
        out = t_sigma_table(sigma, vs, n)
        weights = np.array([int(w).bit_count() for w in out.tolist()])
        bad += int(np.count_nonzero(weights != k))
        checked += len(vs)
    return checked, bad


def _perm_tables(family: Family, n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array([p._zero for p in all_permutations(n + 1)], dtype=np.int64)
    tables = np.array([family_table(family, Permutation(row + 1), n) for row in perms])
    return perms, tables


@dataclass
class LawResult:
    checked: int
    violations: int
    exhaustive: bool
    first_violation: tuple[list[int], list[int]] | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


def homomorphism_law(family: Family, n: int, *, samples: int | None = None,
                     seed: int = 0) -> LawResult:
    """f_(s1) . f_(s2) == f_(s1 s2) pointwise on all subsets of [n].

    Exhaustive over S_(n+1)^2 unless ``samples`` is given or the pair count exceeds
    ``EXHAUSTIVE_PAIRS_LIMIT``, in which case ``samples`` (default 10^4) seeded pairs are drawn.
    """
    m = n + 1
    pairs = math.factorial(m) ** 2
    if samples is None and pairs <= EXHAUSTIVE_PAIRS_LIMIT:
        perms, tables = _perm_tables(family, n)
        weights = m ** np.arange(m - 1, -1, -1)
        keys = perms @ weights
        bad, first = 0, None
        for i in range(len(perms)):
            prod = perms[i][perms]                      # (s_i . s_j) in zero-based images
            idx = np.searchsorted(keys, prod @ weights)
            lhs = tables[i][tables]
            diff = np.any(lhs != tables[idx], axis=1)
            nbad = int(np.count_nonzero(diff))
            if nbad and first is None:
                j = int(np.flatnonzero(diff)[0])
                first = ((perms[i] + 1).tolist(), (perms[j] + 1).tolist())
            bad += nbad
        return LawResult(pairs, bad, True, first)
    rng = random.Random(seed)
    count = samples or SAMPLED_PAIRS
    bad, first = 0, None
    for _ in range(count):
        a, b = Permutation.random(m, rng), Permutation.random(m, rng)
        ta, tb = family_table(family, a, n), family_table(family, b, n)
        if not np.array_equal(ta[tb], family_table(family, a * b, n)):
            bad += 1
            first = first or (list(a.images), list(b.images))
    return LawResult(count, bad, False, first)


def automorphism_law(family: Family, g: HGraph, *, samples: int | None = None,
                     seed: int = 0) -> LawResult:
    """Every family map (or ``samples`` random ones) is an automorphism of g."""
    n = g.n
    if samples is None:
        perms = list(all_permutations(n + 1))
    else:
        rng = random.Random(seed)
        perms = [Permutation.random(n + 1, rng) for _ in range(samples)]
    bad, first = 0, None
    for p in perms:
        if not check_automorphism(SymmetryElement(n, 0, p, family), g):
            bad += 1
            first = first or (list(p.images), [])
    return LawResult(len(perms), bad, samples is None, first)


def injectivity_count(family: Family, n: int) -> tuple[int, int]:
    """(|S_(n+1)|, number of distinct family maps)."""
    _, tables = _perm_tables(family, n)
    return len(tables), len(np.unique(tables, axis=0))


def composition_law(n: int, k: int, samples: int, seed: int) -> LawResult:
    """compose(a, b) agrees pointwise with applying b then a, for random structured elements."""
    rng = random.Random(seed)
    fams = known_families(n, k)
    bad, first = 0, None
    for _ in range(samples):
        fam = rng.choice(fams)
        els = []
        for f in (fam, rng.choice([Family.PLAIN, fam])):
            size = n if f is Family.PLAIN else n + 1
            els.append(SymmetryElement(n, rng.randrange(1 << n), Permutation.random(size, rng), f))
        a, b = els
        c = compose(a, b)
        c_tab = c.table() if isinstance(c, SymmetryElement) else None
        if c_tab is None or not np.array_equal(c_tab, a.table()[b.table()]):
            bad += 1
            first = first or (list(a.perm.images), list(b.perm.images))
    return LawResult(samples, bad, False, first)


# --- report -------------------------------------------------------------------


@dataclass
class ClaimEntry:
    claim_id: str
    anchor: str
    n: int
    k: int
    status: str
    values: dict = field(default_factory=dict)
    open_question: bool = False
    runtime: float | None = None

    def to_json_dict(self, timings: bool) -> dict:
        d = {"claim_id": self.claim_id, "anchor": self.anchor, "n": self.n, "k": self.k,
             "status": self.status, "values": self.values}
        if self.open_question:
            d["open_question"] = True
        if timings:
            d["runtime"] = round(self.runtime or 0.0, 4)
        return d


@dataclass
class VerificationReport:
    max_n: int
    seed: int
    entries: list[ClaimEntry]
    aut_entries: list[dict]

    def refuted(self, strict: bool = False) -> list[ClaimEntry]:
        return [e for e in self.entries
                if e.status == REFUTED and (strict or not e.open_question)]

    def summary(self) -> dict:
        out = {s: 0 for s in (VERIFIED, REFUTED, UNKNOWN, SKIPPED)}
        for e in self.entries:
            out[e.status] += 1
        out["refuted_open_question"] = sum(1 for e in self.entries
                                        if e.status == REFUTED and e.open_question)
        return out

    def to_json_dict(self, timings: bool = False) -> dict:
        return {
            "tool": "hnk",
            "tool_version": __version__,
            "grid": {"max_n": self.max_n,
                     "points": [list(p) for p in sorted({(e.n, e.k) for e in self.entries})]},
            "seed": self.seed,
            "summary": self.summary(),
            "entries": [e.to_json_dict(timings) for e in self.entries],
            "aut_entries": self.aut_entries,
        }


# claim id -> statement checked (kept short; these are what the report shows)
CLAIMS: dict[str, str] = {
    "components": "connected for odd k; for even k exactly two components, the odd and even sets",
    "parity-isomorphism": "for even k, translation by an odd set maps H'(n,k) onto H''(n,k)",
    "complement-isomorphism": "for n even and k odd, H(n,k) is isomorphic to H(n,n-k)",
    "translations": "every translation is an automorphism and they act transitively",
    "permutations": "every permutation of [n] acts as an automorphism",
    "arc-transitive": "the connected graph (even component for even k) is arc-transitive",
    "diameter": "BFS diameter equals the closed form where one is stated",
    "aut-order": "oracle |Aut(H(n,k))| equals the claimed order; stabilizer = constructed maps",
    "aut-order-component": "oracle |Aut(H''(n,k))| equals 2^(n-1) n! for even k",
    "weight-preservation": "for n = 2k-1, T_sigma preserves weight k for every sigma in S_(n+1)",
    "extA-automorphisms": "for n = 2k-1, every f_sigma is an automorphism",
    "extA-homomorphism": "for n = 2k-1, f_(s1) f_(s2) = f_(s1 s2)",
    "extA-injective": "for n = 2k-1, sigma -> f_sigma is injective",
    "extB-automorphisms": "for n = 2k+1, k odd >= 3, every f^sigma is an automorphism",
    "extB-homomorphism": "for n = 2k+1, k odd >= 3, f^(s1) f^(s2) = f^(s1 s2)",
    "extB-injective": "for n = 2k+1, k odd >= 3, sigma -> f^sigma is injective",
    "composition-law": "translation-first normal form is closed under composition",
    "geodesic-classification": "geodesic transitivity matches the classification rule",
    "nested-chains": "maximal geodesics from the empty set in H''(n,n-1), n odd, alternate A/B chains",
    "neighbor-counts": "closed-form neighbour counts equal enumeration",
    "sequence-shape": "neighbour-count sequences have the stated monotonicity and symmetry",
}


def _entry(cid: str, n: int, k: int, status: str, **values) -> ClaimEntry:
    return ClaimEntry(cid, CLAIMS[cid], n, k, status, values)


def _law_values(res: LawResult) -> dict:
    d = {"checked": res.checked, "violations": res.violations, "exhaustive": res.exhaustive}
    if res.first_violation:
        d["first_violation"] = list(res.first_violation)
    return d


class _Point:
    """All claims at one grid point, sharing built graphs."""

    def __init__(self, n: int, k: int, seed: int):
        self.n, self.k, self.seed = n, k, seed
        self._graphs: dict[Component, HGraph] = {}

    def graph(self, comp: Component = Component.WHOLE) -> HGraph:
        if comp not in self._graphs:
            self._graphs[comp] = build_graph(GraphParams(self.n, self.k, comp))
        return self._graphs[comp]

    @property
    def connected_graph(self) -> HGraph:
        return self.graph(Component.EVEN if self.k % 2 == 0 else Component.WHOLE)

    def e(self, cid: str, status: str, **values) -> ClaimEntry:
        return _entry(cid, self.n, self.k, status, **values)

    def skip(self, cid: str, why: str) -> ClaimEntry:
        return self.e(cid, SKIPPED, reason=why)

    # -- individual claims --

    def components(self) -> ClaimEntry:
        comps = connected_components(self.graph())
        sizes = sorted(len(c) for c in comps)
        if self.k % 2:
            ok = len(comps) == 1
        else:
            parities = [{int(v).bit_count() % 2 for v in c} for c in comps]
            ok = len(comps) == 2 and all(len(p) == 1 for p in parities)
        return self.e("components", VERIFIED if ok else REFUTED, component_sizes=sizes)

    def parity_isomorphism(self) -> ClaimEntry:
        if self.k % 2:
            return self.skip("parity-isomorphism", "k odd")
        try:
            w = parity_isomorphism_check(self.n, self.k)
        except TheoremViolation as exc:
            return self.e("parity-isomorphism", REFUTED, error=str(exc))
        return self.e("parity-isomorphism", VERIFIED, edges_checked=w.edges_checked)

    def complement_isomorphism(self) -> ClaimEntry:
        if self.n % 2 or self.k % 2 == 0:
            return self.skip("complement-isomorphism", "needs n even, k odd")
        try:
            w = complement_isomorphism_check(self.n, self.k)
        except TheoremViolation as exc:
            return self.e("complement-isomorphism", REFUTED, error=str(exc))
        return self.e("complement-isomorphism", VERIFIED, edges_checked=w.edges_checked)

    def translations(self) -> ClaimEntry:
        g = self.graph()
        bad = [x for x in range(1 << self.n)
               if not check_automorphism(SymmetryElement.translation_by(self.n, x), g)]
        ok = not bad and translations_transitive(g)
        return self.e("translations", VERIFIED if ok else REFUTED,
                      checked=1 << self.n, violations=len(bad))

    def permutations(self) -> ClaimEntry:
        g = self.graph()
        if self.n <= 7:
            perms = list(all_permutations(self.n))
        else:
            perms = [Permutation.transposition(self.n, 1, 2),
                     Permutation.from_cycles(self.n, tuple(range(1, self.n + 1)))]
        bad = sum(1 for p in perms if not check_automorphism(SymmetryElement(self.n, 0, p), g))
        return self.e("permutations", VERIFIED if bad == 0 else REFUTED,
                      checked=len(perms), exhaustive=self.n <= 7, violations=bad)

    def arc_transitive(self) -> ClaimEntry:
        ok = is_arc_transitive(self.connected_graph)
        return self.e("arc-transitive", VERIFIED if ok else REFUTED)

    def diameter(self) -> ClaimEntry:
        pred = predicted_diameter(self.n, self.k)
        actual = diameter(self.connected_graph)
        if pred.value is None:
            return self.e("diameter", UNKNOWN, bfs=actual, case=pred.case)
        return self.e("diameter", VERIFIED if pred.value == actual else REFUTED,
                      bfs=actual, predicted=pred.value, case=pred.case)

    def aut_order(self) -> tuple[ClaimEntry, dict]:
        g = self.graph()
        ve = verification_entry(g)
        values = {"oracle": ve.oracle_order, "predicted": ve.predicted_order,
                  "stabilizer": ve.stabilizer_order,
                  "outside_constructed": ve.elements_outside_known_group, "case": ve.case_tag}
        if ve.predicted_order is None:
            return self.e("aut-order", UNKNOWN, **values), ve.to_json_dict()
        ok = ve.agrees and ve.elements_outside_known_group == 0
        entry = self.e("aut-order", VERIFIED if ok else REFUTED, **values)
        if not ok:
            entry.open_question = self.k % 2 == 0
            witness = find_unexplained(g)
            if witness is not None:
                entry.values["witness"] = describe_map(witness)
        return entry, ve.to_json_dict()

    def aut_order_component(self) -> tuple[ClaimEntry, dict | None]:
        if self.k % 2:
            return self.skip("aut-order-component", "k odd: connected"), None
        g = self.graph(Component.EVEN)
        ve = verification_entry(g)
        values = {"oracle": ve.oracle_order, "predicted": ve.predicted_order,
                  "stabilizer": ve.stabilizer_order,
                  "outside_constructed": ve.elements_outside_known_group}
        if ve.predicted_order is None:
            return self.e("aut-order-component", UNKNOWN, **values), ve.to_json_dict()
        ok = ve.agrees and ve.elements_outside_known_group == 0
        return self.e("aut-order-component", VERIFIED if ok else REFUTED, **values), ve.to_json_dict()

    def _ext_a_applies(self) -> bool:
        return self.k >= 2 and self.n == 2 * self.k - 1

    def _ext_b_applies(self) -> bool:
        return self.k % 2 == 1 and self.k >= 3 and self.n == 2 * self.k + 1

    def weight_preservation(self) -> ClaimEntry:
        if not self._ext_a_applies():
            return self.skip("weight-preservation", "needs n = 2k-1, k >= 2")
        checked, bad = weight_preservation_violations(self.n, self.k)
        return self.e("weight-preservation", VERIFIED if bad == 0 else REFUTED,
                      checked=checked, violations=bad)

    def _law(self, cid: str, applies: bool, why: str, run: Callable[[], LawResult]) -> ClaimEntry:
        if not applies:
            return self.skip(cid, why)
        res = run()
        return self.e(cid, VERIFIED if res.ok else REFUTED, **_law_values(res))

    def ext_claims(self) -> list[ClaimEntry]:
        out = []
        for fam, cid, applies, why in (
                (Family.EXT_A, "extA", self._ext_a_applies(), "needs n = 2k-1, k >= 2"),
                (Family.EXT_B, "extB", self._ext_b_applies(), "needs n = 2k+1, k odd >= 3")):
            exhaustive_aut = math.factorial(self.n + 1) <= 40320
            out.append(self._law(
                f"{cid}-automorphisms", applies, why,
                lambda fam=fam: automorphism_law(fam, self.graph(),
                                                 samples=None if exhaustive_aut else 1000,
                                                 seed=self.seed)))
            out.append(self._law(
                f"{cid}-homomorphism", applies, why,
                lambda fam=fam: homomorphism_law(fam, self.n, seed=self.seed)))
            if applies:
                total, distinct = injectivity_count(fam, self.n)
                out.append(self.e(f"{cid}-injective", VERIFIED if total == distinct else REFUTED,
                                  permutations=total, distinct_maps=distinct))
            else:
                out.append(self.skip(f"{cid}-injective", why))
        return out

    def composition(self) -> ClaimEntry:
        res = composition_law(self.n, self.k, 200, self.seed * 1_000_003 + self.n * 101 + self.k)
        return self.e("composition-law", VERIFIED if res.ok else REFUTED, **_law_values(res))

    def geodesic(self) -> ClaimEntry:
        cls = classify_geodesic_transitivity(self.n, self.k)
        v = transitivity_verdict(self.connected_graph)
        values = {"classification": cls.value, "diameter": v.diameter,
                  "max_s_transitive": v.s_max_transitive}
        if v.witness_orbits:
            values["orbit_representatives"] = [list(p) for p in v.witness_orbits[:4]]
        if cls is Classification.UNCLASSIFIED:
            return self.e("geodesic-classification", UNKNOWN, **values)
        if cls is Classification.GEODESIC_TRANSITIVE:
            ok = v.geodesic_transitive
        else:
            ok = v.s_max_transitive < 2
        return self.e("geodesic-classification", VERIFIED if ok else REFUTED, **values)

    def nested_chains(self) -> ClaimEntry:
        if not (self.k == self.n - 1 and self.n % 2 == 1 and self.n >= 5):
            return self.skip("nested-chains", "needs k = n-1, n odd >= 5")
        g = self.graph(Component.EVEN)
        d = len(bfs_levels(g, 0)) - 1
        paths = geodesic_array(g, 0, d)
        bad = [p for p in paths.tolist() if nested_chain_violations(tuple(p), self.n)]
        return self.e("nested-chains", VERIFIED if not bad else REFUTED,
                      geodesics=len(paths), violations=len(bad))

    def neighbor_counts(self) -> list[ClaimEntry]:
        fams = applicable_families(self.n, self.k)
        if not fams:
            return [self.skip("neighbor-counts", "no sequence family at this (n,k)"),
                    self.skip("sequence-shape", "no sequence family at this (n,k)")]
        g = self.graph()
        mism, shape_bad, tables = [], [], {}
        for fam in fams:
            t = u_sequence(fam, self.k, self.n)
            brute = bruteforce_values(t, g)
            tables[fam.value] = {str(i): v for i, v in sorted(t.values.items())}
            if brute != t.values:
                mism.append(fam.value)
            if not monotonicity_check(t).ok:
                shape_bad.append(fam.value)
        values = {"families": [f.value for f in fams], "tables": tables}
        if SeqFamily.U_2KP1_ODD in fams:
            values["odd_layer_as_printed"] = [literal_odd_layer_value(self.k, m)
                                              for m in range(1, self.k + 2)]
        counts = self.e("neighbor-counts", VERIFIED if not mism else REFUTED,
                        mismatches=mism, **values)
        shape = self.e("sequence-shape", VERIFIED if not shape_bad else REFUTED,
                       violations=shape_bad)
        return [counts, shape]

    def run(self) -> tuple[list[ClaimEntry], list[dict]]:
        entries: list[ClaimEntry] = []
        aut_rows: list[dict] = []

        def timed(fn):
            t0 = time.perf_counter()
            res = fn()
            dt = time.perf_counter() - t0
            items = res if isinstance(res, list) else [res]
            for it in items:
                it.runtime = dt / len(items)
            entries.extend(items)

        for fn in (self.components, self.parity_isomorphism, self.complement_isomorphism,
                   self.translations, self.permutations, self.arc_transitive, self.diameter):
            timed(fn)
        for fn in (self.aut_order, self.aut_order_component):
            t0 = time.perf_counter()
            entry, row = fn()
            entry.runtime = time.perf_counter() - t0
            entries.append(entry)
            if row is not None:
                aut_rows.append(row)
        for fn in (self.weight_preservation, self.ext_claims, self.composition, self.geodesic,
                   self.nested_chains, self.neighbor_counts):
            timed(fn)
        return entries, aut_rows


def grid(max_n: int) -> list[tuple[int, int]]:
    return [(n, k) for n in range(2, max_n + 1) for k in range(1, n)]


def run_verification(max_n: int = 6, seed: int = 0,
                     progress: Callable[[str], None] | None = None) -> VerificationReport:
    if max_n < 2:
        raise UsageError("--max-n must be at least 2")
    cap = size_cap()
    if (1 << max_n) > cap:
        raise SizeCapExceeded(f"--max-n {max_n} needs {1 << max_n} vertices; cap is {cap}")
    entries, aut_rows = [], []
    for n, k in grid(max_n):
        if progress:
            progress(f"H({n},{k})")
        e, rows = _Point(n, k, seed).run()
        entries += e
        aut_rows += rows
    entries.sort(key=lambda e: (e.n, e.k, e.claim_id))
    aut_rows.sort(key=lambda r: (r["n"], r["k"], r["component"]))
    return VerificationReport(max_n, seed, entries, aut_rows)
