import math
from fractions import Fraction

import pytest

from troplift import fixtures
from troplift.errors import InvariantError, PreconditionError
from troplift.graph import (
    AbstractGraph,
    Edge,
    EmbeddedGraph,
    Leaf,
    Subgraph,
    Vertex,
    blocks,
    check_balanced,
    first_betti,
    is_indecomposable_vertex,
    level_preimage,
    level_value,
    metric_distance,
    simple_cycles,
    structure_checks,
    subdivide,
    total_genus,
    vertex_point,
    whole_graph,
)


def path_graph(n):
    vertices = [Vertex(f"v{i}") for i in range(n)]
    edges = [Edge(f"e{i}", (f"v{i}", f"v{i+1}")) for i in range(n - 1)]
    return AbstractGraph(vertices, edges)


def cycle_graph(n, genus=()):
    marks = dict(genus)
    vertices = [Vertex(f"v{i}", marks.get(f"v{i}", 0)) for i in range(n)]
    edges = [Edge(f"e{i}", (f"v{i}", f"v{(i+1) % n}")) for i in range(n)]
    return AbstractGraph(vertices, edges)


# ---------------------------------------------------------------------------
# betti numbers and genus
# ---------------------------------------------------------------------------

def test_first_betti_tree():
    assert first_betti(path_graph(5)) == 0


def test_first_betti_cycle():
    assert first_betti(cycle_graph(3)) == 1


def test_first_betti_theta():
    assert first_betti(fixtures.theta()) == 2


def test_total_genus_cycle():
    assert total_genus(cycle_graph(3)) == 1


def test_total_genus_isolated_genus2():
    g = AbstractGraph([Vertex("v", 2)])
    assert total_genus(g) == 2


def test_total_genus_theta_with_mark():
    g = AbstractGraph([Vertex("u", 1), Vertex("w")],
                      [Edge("e1", ("u", "w")), Edge("e2", ("u", "w")),
                       Edge("e3", ("u", "w"))])
    assert total_genus(g) == 3


# ---------------------------------------------------------------------------
# balancing
# ---------------------------------------------------------------------------

def test_triangle_balanced():
    assert check_balanced(fixtures.triangle()).ok


def test_triangle_with_leaf_deleted_unbalanced():
    g = fixtures.triangle()
    stripped = EmbeddedGraph(
        3,
        list(g.vertices.values()),
        list(g.edges.values()),
        [l for l in g.leaves.values() if l.id != "lA"],
        dict(g.positions),
        {k: v for k, v in g.leaf_directions.items() if k != "lA"},
    )
    verdict = check_balanced(stripped)
    assert not verdict.ok
    assert verdict.residuals == {"A": (Fraction(1), Fraction(1), Fraction(0))}


def test_two_leaf_vertex_balanced():
    g = EmbeddedGraph(2, [Vertex("v")], [], [Leaf("l1", "v"), Leaf("l2", "v")],
                      {"v": (0, 0)}, {"l1": (1, 0), "l2": (-1, 0)})
    assert check_balanced(g).ok


def test_non_primitive_leaf_direction_rejected():
    with pytest.raises(InvariantError):
        EmbeddedGraph(2, [Vertex("v")], [], [Leaf("l", "v")],
                      {"v": (0, 0)}, {"l": (2, 2)})


def test_lattice_length_mismatch_rejected():
    with pytest.raises(InvariantError):
        EmbeddedGraph(1, [Vertex("a"), Vertex("b")],
                      [Edge("e", ("a", "b"), 1, Fraction(2))], [],
                      {"a": (0,), "b": (1,)}, {})


# ---------------------------------------------------------------------------
# subdivision
# ---------------------------------------------------------------------------

def test_subdivide_identity():
    g = fixtures.triangle()
    assert subdivide(g, 1) is g


def test_subdivide_segment():
    g = fixtures.segment_embedded()
    g3 = subdivide(g, 3)
    assert len(g3.vertices) == 4
    assert len(g3.edges) == 3
    assert all(e.length == 1 for e in g3.edges.values())
    assert g3.positions["v2"] == (Fraction(3),)
    assert g3.positions["e@1"] == (Fraction(1),)


def test_subdivide_preserves_invariants():
    for builder in (fixtures.triangle, fixtures.genus3, lambda: fixtures.elliptic()):
        g = builder()
        for l in (1, 2, 3):
            gl = subdivide(g, l)
            assert first_betti(gl) == first_betti(g)
            assert total_genus(gl) == total_genus(g)
            assert check_balanced(gl).ok


# ---------------------------------------------------------------------------
# level preimages
# ---------------------------------------------------------------------------

def test_level_preimage_whole_triangle():
    g = fixtures.triangle()
    sub = level_preimage(g, (0, 0, 1), 0)
    assert sub.edges == frozenset(g.edges)
    assert sub.leaves == frozenset(g.leaves)
    assert sub.boundary() == []


def test_level_preimage_crossing_points():
    g = fixtures.triangle()
    sub = level_preimage(g, (1, 0, 0), Fraction(1, 2))
    # crosses the two edges through x1 = 1/2; all leaves point away from it
    assert sub.edges == frozenset()
    assert sub.virtual_vertices == {"cut:AB", "cut:BC"}
    assert sub.graph.positions["cut:AB"] == (Fraction(1, 2), Fraction(0), Fraction(0))


def test_level_preimage_leaf_crossing():
    g = fixtures.triangle()
    sub = level_preimage(g, (1, 0, 0), Fraction(3, 2))
    # only the leaf at B, direction (2,-1,0), reaches x1 = 3/2 (at parameter 1/4)
    assert sub.virtual_vertices == {"cut:lB"}
    assert sub.graph.positions["cut:lB"] == (Fraction(3, 2), Fraction(-1, 4), Fraction(0))
    # the remainder of the leaf is re-anchored at the cut point
    assert sub.graph.leaves["lB"].vertex == "cut:lB"


def test_level_preimage_empty():
    g = fixtures.segment_embedded()
    sub = level_preimage(g, (1,), Fraction(7, 2))
    # beyond the segment: only the leaf at v2 crosses
    assert sub.edges == frozenset() and not (set(sub.vertices) - sub.virtual_vertices)


def test_level_preimage_scaling_invariance():
    g = fixtures.elliptic()
    for k in (1, 2, 5):
        a = level_preimage(g, (0, 0, 1), 0)
        b = level_preimage(g, (0, 0, k), 0)
        assert a.vertices == b.vertices and a.edges == b.edges and a.leaves == b.leaves


def test_level_preimage_g3_matches_plane_part():
    g = fixtures.genus3()
    sub = level_preimage(g, (0, 0, 1), 0)
    assert sub.vertices == frozenset(g.vertices)
    assert sub.edges == frozenset(g.edges)
    assert sub.leaves == frozenset()
    assert sorted(sub.boundary()) == sorted(
        ["L1", "L2", "Et1", "Et2", "Em1", "Em2", "Eb1", "Eb2"])


def test_level_preimage_commutes_with_subdivision():
    g = fixtures.elliptic()
    base = level_preimage(g, (0, 0, 1), 0)
    for l in (2, 3):
        gl = subdivide(g, l)
        lifted = level_preimage(gl, (0, 0, 1), 0)
        assert {v for v in base.vertices} <= {v for v in lifted.vertices}
        assert len(lifted.boundary()) == len(base.boundary())
        assert first_betti(lifted) == first_betti(base)


# ---------------------------------------------------------------------------
# metric distance
# ---------------------------------------------------------------------------

def elliptic_cycle(g):
    return Subgraph.from_elements(g, edges=["cyc1", "cyc2", "cyc3", "cyc4"])


def test_distance_zero_on_subgraph():
    g = fixtures.elliptic()
    gamma = elliptic_cycle(g)
    assert metric_distance(g, vertex_point("X1"), gamma) == 0


def test_distance_through_junction():
    g = fixtures.elliptic(a=1, d=1)
    gamma = elliptic_cycle(g)
    assert metric_distance(g, vertex_point("Aend"), gamma) == 2


def test_distance_respects_lengths():
    g = fixtures.elliptic(a=2, b=2, c=3, d=3)
    gamma = elliptic_cycle(g)
    assert metric_distance(g, vertex_point("Aend"), gamma) == 5
    assert metric_distance(g, vertex_point("Bend"), gamma) == 2
    assert metric_distance(g, vertex_point("Cend"), gamma) == 3


def test_distance_disconnected_is_infinite():
    g = AbstractGraph([Vertex("a"), Vertex("b"), Vertex("c")],
                      [Edge("e", ("a", "b"))])
    gamma = Subgraph(g, frozenset({"c"}))
    assert math.isinf(metric_distance(g, vertex_point("a"), gamma))


def test_distance_triangle_inequality_sampled():
    import random
    g = fixtures.genus3()
    rng = random.Random(7)
    names = g.vertex_ids()
    for _ in range(40):
        x, y, z = (rng.choice(names) for _ in range(3))
        gy = Subgraph(g, frozenset({y}))
        gz = Subgraph(g, frozenset({z}))
        dxz = metric_distance(g, vertex_point(x), gz)
        dxy = metric_distance(g, vertex_point(x), gy)
        dyz = metric_distance(g, vertex_point(y), gz)
        assert dxz <= dxy + dyz


# ---------------------------------------------------------------------------
# structure checks
# ---------------------------------------------------------------------------

def test_structure_cycle_inside_elliptic():
    g = fixtures.elliptic()
    rep = structure_checks(elliptic_cycle(g))
    assert rep.two_vertex_connected
    assert rep.is_cycle
    assert rep.complement_is_forest
    assert not rep.has_one_valent_vertex


def test_structure_single_edge():
    g = fixtures.elliptic()
    rep = structure_checks(Subgraph.from_elements(g, edges=["cyc1"]))
    assert not rep.two_vertex_connected
    assert not rep.is_cycle
    assert rep.has_one_valent_vertex


def test_structure_complement_not_forest():
    g = fixtures.genus3()
    gamma = Subgraph.from_elements(g, edges=["t_up", "t_dn", "t_cl"])
    rep = structure_checks(gamma)
    assert rep.is_cycle
    assert not rep.complement_is_forest  # two other triangles remain


def test_simple_cycles_and_blocks():
    g = fixtures.genus3()
    sub = whole_graph(g)
    cycles = simple_cycles(sub)
    assert len(cycles) == 3
    assert ("t_cl", "t_dn", "t_up") in cycles
    blks = blocks(sub)
    assert ("b_cl", "b_dn", "b_up") in blks


def test_simple_cycles_theta():
    g = fixtures.theta()
    cycles = simple_cycles(whole_graph(g))
    assert cycles == [("e1", "e2"), ("e1", "e3"), ("e2", "e3")]


# ---------------------------------------------------------------------------
# indecomposability
# ---------------------------------------------------------------------------

def test_two_valent_indecomposable():
    g = EmbeddedGraph(2, [Vertex("v")], [], [Leaf("l1", "v"), Leaf("l2", "v")],
                      {"v": (0, 0)}, {"l1": (1, 1), "l2": (-1, -1)})
    assert is_indecomposable_vertex(g, "v")


def test_four_valent_split_decomposable():
    g = EmbeddedGraph(2, [Vertex("v")], [],
                      [Leaf(f"l{i}", "v") for i in range(4)],
                      {"v": (0, 0)},
                      {"l0": (1, 0), "l1": (-1, 0), "l2": (0, 1), "l3": (0, -1)})
    assert not is_indecomposable_vertex(g, "v")


def test_g3_hub_indecomposable():
    g = fixtures.genus3()
    assert is_indecomposable_vertex(g, "q")


def test_unbalanced_vertex_rejected():
    g = EmbeddedGraph(2, [Vertex("v")], [], [Leaf("l1", "v")],
                      {"v": (0, 0)}, {"l1": (1, 0)})
    with pytest.raises(PreconditionError):
        is_indecomposable_vertex(g, "v")


# ---------------------------------------------------------------------------
# level values
# ---------------------------------------------------------------------------

def test_level_values():
    g = fixtures.elliptic()
    assert level_value(g, (0, 0, 1), "X1") == 0
    assert level_value(g, (1, 0, 0), "X2") == 1
