import json

import pytest

from hnk.symmetries import Family
from hnk.verify import (
    CLAIMS, REFUTED, VERIFIED, automorphism_law, composition_law, grid, homomorphism_law,
    injectivity_count, run_verification, weight_preservation_violations,
)
from hnk.hgraph import build_graph


@pytest.fixture(scope="module")
def report5():
    return run_verification(5, seed=0)


def test_every_claim_once_per_grid_point(report5):
    seen = {}
    for e in report5.entries:
        seen.setdefault((e.n, e.k), []).append(e.claim_id)
    assert sorted(seen) == grid(5)
    for ids in seen.values():
        assert sorted(ids) == sorted(CLAIMS)


def test_no_refutations_on_connected_cases(report5):
    bad = [e for e in report5.entries if e.status == REFUTED and not e.open_question]
    assert bad == []
    assert report5.refuted() == []
    assert all(e.k % 2 == 0 for e in report5.refuted(strict=True))


def test_probe_entries_carry_witnesses(report5):
    e = next(e for e in report5.entries if (e.n, e.k, e.claim_id) == (3, 2, "aut-order"))
    assert e.status == REFUTED and e.open_question
    assert e.values["oracle"] == 1152 and e.values["predicted"] == 192
    assert "->" in e.values["witness"]


def test_report_is_sorted_and_serialisable(report5):
    keys = [(e.n, e.k, e.claim_id) for e in report5.entries]
    assert keys == sorted(keys)
    d = report5.to_json_dict()
    assert json.loads(json.dumps(d)) == d
    assert d["summary"]["refuted"] == d["summary"]["refuted_open_question"]


def test_connected_aut_orders_verified(report5):
    status = {(e.n, e.k): e.status for e in report5.entries if e.claim_id == "aut-order"}
    for nk in [(2, 1), (3, 1), (4, 1), (4, 3), (5, 1), (5, 3)]:
        assert status[nk] == VERIFIED


def test_law_helpers():
    assert weight_preservation_violations(3, 2) == (24 * 3, 0)
    assert homomorphism_law(Family.EXT_A, 3).ok
    assert homomorphism_law(Family.EXT_B, 7, samples=200, seed=1).ok
    assert automorphism_law(Family.EXT_B, build_graph(n=7, k=3), samples=50, seed=2).ok
    assert injectivity_count(Family.EXT_A, 5) == (720, 720)
    assert composition_law(5, 3, 100, 4).ok


def test_law_helpers_detect_violations():
    res = automorphism_law(Family.EXT_A, build_graph(n=5, k=2), samples=50, seed=0)
    assert not res.ok and res.first_violation is not None
    checked, bad = weight_preservation_violations(5, 2)
    assert bad > 0
