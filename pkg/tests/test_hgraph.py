import json
import math

import numpy as np
import pytest

from hnk.hgraph import (
    Component, GraphParams, TheoremViolation, VertexMap, build_graph, complement_isomorphism_check,
    connected_components, default_root, diameter, distance_classes, is_connected,
    parity_isomorphism_check, predicted_diameter, to_dot, to_json, to_json_dict,
)
from hnk.subsets import UsageError
from oracles import naive_distances, naive_edges, to_mask

SMALL = [(n, k) for n in range(1, 7) for k in range(0, n + 1)]


@pytest.mark.parametrize("n,k", SMALL)
def test_edges_match_naive_construction(n, k):
    g = build_graph(n=n, k=k)
    edges, _ = naive_edges(n, k)
    assert {(min(to_mask(a), to_mask(b)), max(to_mask(a), to_mask(b)))
            for a, b in map(tuple, edges)} == set(g.edges())
    assert g.num_edges == len(edges) == (2 ** n * math.comb(n, k) // 2 if k else 0)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 7) for k in range(2, n, 2)])
def test_components_match_parity(n, k):
    for comp, parity in ((Component.ODD, 1), (Component.EVEN, 0)):
        g = build_graph(n=n, k=k, component=comp)
        edges, verts = naive_edges(n, k, parity)
        assert sorted(g.vertices.tolist()) == sorted(to_mask(v) for v in verts)
        assert len(list(g.edges())) == len(edges)


def test_cube_counts():
    g = build_graph(n=3, k=1)
    assert (g.num_vertices, g.num_edges) == (8, 12)


def test_component_needs_even_k():
    with pytest.raises(UsageError):
        GraphParams(3, 1, Component.EVEN)
    with pytest.raises(UsageError):
        GraphParams(3, 4)


@pytest.mark.parametrize("n,k", [(4, 1), (5, 3), (6, 2), (6, 5), (8, 3)])
def test_representations_agree(n, k):
    build_graph(n=n, k=k).check_adjacency_consistency()


@pytest.mark.parametrize("n,k", [(5, 1), (5, 3), (6, 3), (6, 5), (7, 2), (7, 4)])
def test_bfs_matches_naive(n, k):
    g = build_graph(n=n, k=k)
    edges, verts = naive_edges(n, k)
    dist = naive_distances(verts, edges, frozenset())
    got = distance_classes(g, 0).distance_of()
    assert got == {to_mask(v): d for v, d in dist.items()}


def test_connectivity_by_parity_of_k():
    assert is_connected(build_graph(n=6, k=3))
    comps = connected_components(build_graph(n=6, k=2))
    assert [len(c) for c in comps] == [32, 32]
    with pytest.raises(UsageError):
        diameter(build_graph(n=6, k=2))


def test_default_root():
    assert default_root(build_graph(n=4, k=2, component=Component.ODD)) == 1
    assert default_root(build_graph(n=4, k=2, component=Component.EVEN)) == 0


@pytest.mark.parametrize("n,k,expected", [(5, 3, 3), (7, 1, 7), (4, 3, 4)])
def test_diameter_examples(n, k, expected):
    g = build_graph(n=n, k=k)
    assert diameter(g) == diameter(g, exhaustive=True) == expected


def test_component_diameter():
    g = build_graph(n=6, k=2, component=Component.EVEN)
    assert diameter(g) == diameter(g, exhaustive=True) == 3


def test_predicted_diameter_cases():
    assert predicted_diameter(5, 3).value == 3
    assert predicted_diameter(4, 3).value == 4
    assert predicted_diameter(9, 2).value == 4
    assert predicted_diameter(7, 6).value == 3
    assert predicted_diameter(8, 4).value is None


def test_complement_isomorphism():
    w = complement_isomorphism_check(4, 1)
    assert w.edges_checked == 32
    assert w.mapping.is_bijection()
    with pytest.raises(UsageError):
        complement_isomorphism_check(5, 1)


def test_parity_isomorphism():
    w = parity_isomorphism_check(4, 2)
    assert w.edges_checked == 24
    with pytest.raises(UsageError):
        parity_isomorphism_check(4, 2, translator=3)


def test_bad_witness_is_reported():
    from hnk.hgraph import _check_isomorphism
    src = build_graph(n=3, k=1)
    with pytest.raises(TheoremViolation):
        _check_isomorphism(src, src, lambda x: x ^ 1 if x.bit_count() == 1 else x)


def test_vertex_map_algebra():
    g = build_graph(n=3, k=1)
    a = VertexMap.from_function(g, lambda x: x ^ 5)
    b = VertexMap.from_function(g, lambda x: ((x << 1) | (x >> 2)) & 7)
    assert a.compose(a) == VertexMap.identity(g)
    assert b.compose(b.inverse()) == VertexMap.identity(g)
    assert a.compose(b)(1) == a(b(1))
    with pytest.raises(UsageError):
        a(8)


def test_json_export_shape():
    g = build_graph(n=3, k=1)
    d = json.loads(to_json(g))
    assert d == to_json_dict(g)
    assert set(d) == {"n", "k", "component", "vertices", "edges"}
    assert all(x < y for x, y in d["edges"])
    assert len(d["edges"]) == 12


def test_dot_export():
    dot = to_dot(build_graph(n=2, k=1))
    assert dot.startswith("graph H_2_1 {")
    assert 'v3 [label="{1,2}"];' in dot
    assert dot.count(" -- ") == 4


def test_edges_are_lexicographic():
    edges = list(build_graph(n=4, k=2).edges())
    assert edges == sorted(edges)
    assert np.all(np.array(edges)[:, 0] < np.array(edges)[:, 1])
