import pytest

from troplift import fixtures
from troplift.errors import EnumerationUnsupportedError, MalformedMapError
from troplift.graph import (
    AbstractGraph,
    Edge,
    EmbeddedGraph,
    Leaf,
    Vertex,
    check_balanced,
    total_genus,
)
from troplift.parameterization import (
    ParamMap,
    enumerate_parameterizations,
    identity_parameterization,
    pullback_embedding,
    verify_parameterization,
)


def test_identity_on_g3_verifies():
    p = identity_parameterization(fixtures.genus3())
    assert verify_parameterization(p).ok


def test_wrong_multiplicity_fails_condition3():
    g = fixtures.genus3()
    p = identity_parameterization(g)
    src = p.source
    bad_edges = [Edge(e.id, e.ends, 2 if e.id == "a" else e.multiplicity,
                      e.length if e.id != "a" else e.length)
                 for e in src.edges.values()]
    # doubling mu breaks both the dilation and the preimage sum; check report
    bad_src = AbstractGraph(list(src.vertices.values()), bad_edges,
                            list(src.leaves.values()))
    bad = ParamMap(bad_src, g, dict(p.vertex_map), dict(p.edge_map), dict(p.leaf_map))
    report = verify_parameterization(bad)
    assert not report.ok
    assert any(v.condition == "multiplicity-sum" and v.witness == "a"
               for v in report.violations)


def test_one_valent_contracted_vertex_fails_condition4():
    g = fixtures.triangle()
    p = identity_parameterization(g)
    src = p.source
    vertices = list(src.vertices.values()) + [Vertex("extra")]
    edges = list(src.edges.values()) + [Edge("ce", ("A", "extra"), 0)]
    bad_src = AbstractGraph(vertices, edges, list(src.leaves.values()))
    emap = dict(p.edge_map)
    emap["ce"] = None
    vmap = dict(p.vertex_map)
    vmap["extra"] = "A"
    bad = ParamMap(bad_src, g, vmap, emap, dict(p.leaf_map))
    report = verify_parameterization(bad)
    assert not report.ok
    assert any(v.condition == "semistability" and v.witness == "extra"
               for v in report.violations)


def test_incidence_violation_raises():
    g = fixtures.triangle()
    p = identity_parameterization(g)
    vmap = dict(p.vertex_map)
    vmap["A"] = "B"  # edge AB now maps onto (B, B)
    bad = ParamMap(p.source, g, vmap, dict(p.edge_map), dict(p.leaf_map))
    with pytest.raises(MalformedMapError):
        verify_parameterization(bad)


def test_pullback_embedding_matches_target_for_identity():
    g = fixtures.elliptic()
    p = identity_parameterization(g)
    pb = pullback_embedding(p)
    assert pb.positions == g.positions
    assert check_balanced(pb).ok


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def test_enumerate_g3_genus3_identity_only():
    g = fixtures.genus3()
    result = enumerate_parameterizations(g, 3)
    assert result.raw_count == 1
    assert result.distinct_up_to_symmetry == 1
    only = result.maps[0]
    ident = identity_parameterization(g)
    assert only.source == ident.source
    assert only.vertex_map == ident.vertex_map
    assert only.edge_map == ident.edge_map


def test_enumerate_below_betti_is_empty():
    g = fixtures.genus3()
    assert enumerate_parameterizations(g, 2).raw_count == 0


def test_enumerate_triangle_genus2_markings():
    g = fixtures.triangle()
    result = enumerate_parameterizations(g, 2)
    assert result.raw_count == 3  # one unit of genus on any one vertex
    assert result.distinct_up_to_symmetry == 1
    for p in result.maps:
        assert verify_parameterization(p).ok
        assert total_genus(p.source) == 2


def test_enumerated_maps_all_verify_on_fixtures():
    for builder, genus in ((fixtures.elliptic, 1), (fixtures.elliptic, 2),
                           (fixtures.single_boundary_cycle, 1)):
        g = builder()
        for p in enumerate_parameterizations(g, genus):
            assert verify_parameterization(p).ok
            assert total_genus(p.source) == genus


def test_multiplicity_partitions_enumerated():
    # an edge of multiplicity 2 whose endpoint stars do not split
    g = EmbeddedGraph(
        2,
        [Vertex("u"), Vertex("w")],
        [Edge("e", ("u", "w"), 2, 1)],
        [Leaf("lu1", "u"), Leaf("lu2", "u"), Leaf("lw1", "w"), Leaf("lw2", "w")],
        {"u": (0, 0), "w": (2, 2)},
        {"lu1": (-1, 0), "lu2": (-1, -2), "lw1": (1, 0), "lw2": (1, 2)},
    )
    assert check_balanced(g).ok
    result = enumerate_parameterizations(g, 1)
    # edge partitions 2 = 2 (then one genus mark on either vertex) or 1+1
    assert result.raw_count == 3
    for p in result.maps:
        assert verify_parameterization(p).ok
        assert total_genus(p.source) == 1


def test_enumerate_rejects_decomposable_vertex():
    g = EmbeddedGraph(
        2,
        [Vertex("v")],
        [],
        [Leaf(f"l{i}", "v") for i in range(4)],
        {"v": (0, 0)},
        {"l0": (1, 0), "l1": (-1, 0), "l2": (0, 1), "l3": (0, -1)},
    )
    with pytest.raises(EnumerationUnsupportedError):
        enumerate_parameterizations(g, 0)
