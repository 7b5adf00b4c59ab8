import random
from fractions import Fraction

import pytest

from troplift.ampleness import (
    AmplenessVerdict,
    ample,
    ample_cycle,
    ample_general,
    ample_necessary,
    ample_tree,
    boundary_divisor,
)
from troplift.divisor import PLFunction
from troplift.errors import DispatchError, PreconditionError
from troplift.graph import AbstractGraph, Edge, Subgraph, Vertex


def build_instance(gamma_edges, spikes, values):
    """Parent graph = gamma + spike edges to fresh outer vertices.

    ``gamma_edges``: list of (eid, a, b); ``spikes``: list of (eid, vertex,
    far_value); ``values``: dict vertex -> value on gamma vertices.
    """
    vertex_ids = set(values)
    edges = [Edge(eid, (a, b)) for eid, a, b in gamma_edges]
    vals = {v: values[v] for v in vertex_ids}
    vertices = [Vertex(v) for v in sorted(vertex_ids)]
    for eid, v, far in spikes:
        outer = f"outer_{eid}"
        vertices.append(Vertex(outer))
        edges.append(Edge(eid, (v, outer)))
        vals[outer] = far
    g = AbstractGraph(vertices, edges)
    phi = PLFunction.for_graph(g, vals)
    gamma = Subgraph.from_elements(g, edges=[eid for eid, _, _ in gamma_edges],
                                   extra_vertices=list(values))
    gamma_prime = Subgraph.from_elements(
        g, edges=list(g.edges), extra_vertices=list(g.vertices))
    return g, phi, gamma, gamma_prime


# ---------------------------------------------------------------------------
# boundary divisor
# ---------------------------------------------------------------------------

def test_boundary_divisor_constant_function_empty():
    g, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2")], [("s1", "v1", 4)], {"v1": 4, "v2": 4})
    div = boundary_divisor(phi, gamma, gp)
    assert div.entries == ()
    assert div.min_level == 4


def test_boundary_divisor_collects_negative_slopes():
    g, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", 0), ("s2", "v2", -1)],
        {"v1": 1, "v2": 1, "v3": 1})
    div = boundary_divisor(phi, gamma, gp)
    assert div.degree() == 3
    assert div.vertex_degree("v1") == 1 and div.vertex_degree("v2") == 2


def test_boundary_divisor_min_level_filter():
    g, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", 0), ("s2", "v2", 0)],
        {"v1": 1, "v2": 2, "v3": 1})
    div = boundary_divisor(phi, gamma, gp)
    assert div.degree() == 1
    assert div.entries == (("v1", "s1", 1),)


def test_boundary_divisor_interior_precondition():
    g, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2")], [("s1", "v1", 0)], {"v1": 0, "v2": 0})
    # the spike is outside the outer subgraph, so v1 lies on its boundary
    bad_outer = Subgraph.from_elements(g, edges=["e1"])
    with pytest.raises(PreconditionError):
        boundary_divisor(phi, Subgraph(g, frozenset({"v1"})), bad_outer)


def test_boundary_divisor_degree_invariant_under_outer_subdivision():
    g, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", -2)],
        {"v1": 2, "v2": 2, "v3": 2})
    before = boundary_divisor(phi, gamma, gp).degree()
    # subdivide the spike at its midpoint, keeping the slope (half lengths)
    half = Fraction(1, 2)
    vertices = [Vertex(v) for v in ("v1", "v2", "v3", "mid", "outer_s1")]
    edges = [Edge("e1", ("v1", "v2")), Edge("e2", ("v2", "v3")),
             Edge("e3", ("v3", "v1")),
             Edge("s1a", ("v1", "mid"), 1, half), Edge("s1b", ("mid", "outer_s1"), 1, half)]
    g2 = AbstractGraph(vertices, edges)
    phi2 = PLFunction.for_graph(
        g2, {"v1": 2, "v2": 2, "v3": 2, "mid": 0, "outer_s1": -2})
    gamma2 = Subgraph.from_elements(g2, edges=["e1", "e2", "e3"])
    gp2 = Subgraph.from_elements(g2, edges=list(g2.edges))
    assert boundary_divisor(phi2, gamma2, gp2).degree() == before


# ---------------------------------------------------------------------------
# trees and cycles
# ---------------------------------------------------------------------------

def test_tree_two_min_vertices_ample():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2")],
        [("s1", "v1", -1), ("s2", "v2", -1)],
        {"v1": 0, "v2": 0})
    assert ample_tree(phi, gamma, gp).is_ample


def test_tree_uncovered_min_vertex():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2")],
        [("s1", "v1", -1)],
        {"v1": 0, "v2": 0})
    v = ample_tree(phi, gamma, gp)
    assert v.status == "not_ample"


def test_single_vertex_high_multiplicity():
    _, phi, gamma, gp = build_instance(
        [], [("s1", "v1", -3)], {"v1": 0})
    gamma = Subgraph(gamma.graph, frozenset({"v1"}))
    assert ample_tree(phi, gamma, gp).is_ample


def test_cycle_covered_everywhere_ample():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", -1), ("s2", "v2", -1), ("s3", "v3", -1)],
        {"v1": 0, "v2": 0, "v3": 0})
    assert ample_cycle(phi, gamma, gp).is_ample


def test_cycle_one_uncovered_vertex():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", -1), ("s2", "v2", -1)],
        {"v1": 0, "v2": 0, "v3": 0})
    assert ample_cycle(phi, gamma, gp).status == "not_ample"


def test_cycle_concentrated_degree_fails():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", -2)],
        {"v1": 0, "v2": 0, "v3": 0})
    assert ample_cycle(phi, gamma, gp).status == "not_ample"


def test_cycle_degree_zero_via_general():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [], {"v1": 0, "v2": 0, "v3": 0})
    assert ample_general(phi, gamma, gp).status == "not_ample"


def test_dispatch_errors_on_wrong_shape():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [], {"v1": 0, "v2": 0, "v3": 0})
    with pytest.raises(DispatchError):
        ample_tree(phi, gamma, gp)


# ---------------------------------------------------------------------------
# necessary-only test
# ---------------------------------------------------------------------------

def theta_instance(spikes, values):
    vertex_ids = sorted(values)
    vertices = [Vertex(v) for v in vertex_ids]
    edges = [Edge("e1", ("u", "w")), Edge("e2", ("u", "w")), Edge("e3", ("u", "w"))]
    vals = dict(values)
    for eid, v, far in spikes:
        outer = f"outer_{eid}"
        vertices.append(Vertex(outer))
        edges.append(Edge(eid, (v, outer)))
        vals[outer] = far
    g = AbstractGraph(vertices, edges)
    phi = PLFunction.for_graph(g, vals)
    gamma = Subgraph.from_elements(g, edges=["e1", "e2", "e3"])
    gp = Subgraph.from_elements(g, edges=list(g.edges))
    return phi, gamma, gp


def test_necessary_low_degree_refuted():
    _, phi, gamma, gp = build_instance(
        [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
        [("s1", "v1", -1)],
        {"v1": 0, "v2": 0, "v3": 0})
    assert ample_necessary(phi, gamma, gp).status == "not_ample"


def test_necessary_theta_uncovered_vertex():
    phi, gamma, gp = theta_instance([("s1", "u", -3)], {"u": 0, "w": 0})
    v = ample_necessary(phi, gamma, gp)
    assert v.status == "not_ample"


def test_necessary_indeterminate_when_conditions_pass():
    phi, gamma, gp = theta_instance(
        [("s1", "u", -1), ("s2", "w", -1)], {"u": 0, "w": 0})
    assert ample_necessary(phi, gamma, gp).status == "indeterminate"


def test_dispatcher_genus_marks_indeterminate():
    g = AbstractGraph([Vertex("u", 1), Vertex("w")],
                      [Edge("e1", ("u", "w")), Edge("e2", ("u", "w"))])
    phi = PLFunction.for_graph(g, {"u": 0, "w": 0})
    gamma = Subgraph.from_elements(g, edges=["e1", "e2"])
    gp = gamma
    assert ample(phi, gamma, gp).status == "indeterminate"


# ---------------------------------------------------------------------------
# randomized oracle equivalence
# ---------------------------------------------------------------------------

def random_tree_instance(rng):
    n = rng.randint(1, 8)
    gamma_edges = []
    degree = {f"v{i}": 0 for i in range(n)}
    for i in range(1, n):
        parents = [j for j in range(i) if degree[f"v{j}"] < 2]
        if not parents:
            return None
        p = rng.choice(parents)
        gamma_edges.append((f"g{i}", f"v{p}", f"v{i}"))
        degree[f"v{p}"] += 1
        degree[f"v{i}"] += 1
    values = {f"v{i}": rng.randint(0, 2) for i in range(n)}
    spikes = []
    for i in range(n):
        for k in range(rng.randint(0, 3 - degree[f"v{i}"])):
            far = values[f"v{i}"] + rng.randint(-3, 2)
            spikes.append((f"s{i}_{k}", f"v{i}", far))
    return build_instance(gamma_edges, spikes, values)


def random_cycle_instance(rng):
    n = rng.randint(3, 8)
    gamma_edges = [(f"g{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    values = {f"v{i}": rng.randint(0, 2) for i in range(n)}
    spikes = []
    for i in range(n):
        if rng.random() < 0.8:
            far = values[f"v{i}"] + rng.randint(-3, 2)
            spikes.append((f"s{i}", f"v{i}", far))
    return build_instance(gamma_edges, spikes, values)


def test_general_matches_tree_oracle():
    rng = random.Random(1001)
    checked = 0
    while checked < 200:
        inst = random_tree_instance(rng)
        if inst is None:
            continue
        _, phi, gamma, gp = inst
        exact = ample_tree(phi, gamma, gp)
        general = ample_general(phi, gamma, gp)
        if general.status == "indeterminate":
            continue
        assert general.status == exact.status, (gamma.edges, phi.values)
        checked += 1


def test_general_matches_cycle_oracle():
    rng = random.Random(2002)
    checked = 0
    while checked < 200:
        _, phi, gamma, gp = random_cycle_instance(rng)
        exact = ample_cycle(phi, gamma, gp)
        general = ample_general(phi, gamma, gp)
        if general.status == "indeterminate":
            continue
        assert general.status == exact.status, (gamma.edges, phi.values)
        checked += 1


def test_necessary_never_contradicts_exact():
    rng = random.Random(3003)
    for _ in range(200):
        _, phi, gamma, gp = random_cycle_instance(rng)
        exact = ample_cycle(phi, gamma, gp)
        nec = ample_necessary(phi, gamma, gp)
        if nec.status == "not_ample":
            assert exact.status == "not_ample"


def test_monotonicity_of_tree_and_cycle_deciders():
    rng = random.Random(4004)
    grown = 0
    while grown < 120:
        inst = random_tree_instance(rng)
        if inst is None:
            continue
        _, phi, gamma, gp = inst
        before = ample_tree(phi, gamma, gp)
        if before.status != "ample":
            continue
        # add one more entering edge at a minimum-level vertex
        h = min(phi.value(v) for v in gamma.vertices)
        target = sorted(v for v in gamma.vertices if phi.value(v) == h)[0]
        g = gamma.graph
        vertices = list(g.vertices.values()) + [Vertex("extra_out")]
        edges = list(g.edges.values()) + [Edge("extra", (target, "extra_out"))]
        g2 = AbstractGraph(vertices, edges)
        vals = dict(phi.values)
        vals["extra_out"] = vals[target] - 2
        phi2 = PLFunction.for_graph(g2, vals)
        gamma2 = Subgraph.from_elements(g2, edges=list(gamma.edges),
                                        extra_vertices=list(gamma.vertices))
        gp2 = Subgraph.from_elements(g2, edges=list(g2.edges))
        after = ample_tree(phi2, gamma2, gp2)
        assert after.status == "ample"
        grown += 1
