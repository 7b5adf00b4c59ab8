"""Built-in example graphs used by the test suite and shipped as data files.

Each builder returns a freshly constructed graph.  The companion JSON files
under ``fixtures/`` at the repository root are the canonical serializations
of these builders; ``write_fixture_files`` regenerates them.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import AbstractGraph, Edge, EmbeddedGraph, Leaf, Vertex


def segment() -> AbstractGraph:
    """One bounded edge of length 1 between two bare genus-0 vertices."""
    return AbstractGraph(
        vertices=[Vertex("v1"), Vertex("v2")],
        edges=[Edge("e", ("v1", "v2"))],
    )


def segment_embedded() -> EmbeddedGraph:
    """A unit segment on the line, balanced by a leaf at each end."""
    return EmbeddedGraph(
        ambient_dim=1,
        vertices=[Vertex("v1"), Vertex("v2")],
        edges=[Edge("e", ("v1", "v2"))],
        leaves=[Leaf("l1", "v1"), Leaf("l2", "v2")],
        positions={"v1": (0,), "v2": (1,)},
        leaf_directions={"l1": (-1,), "l2": (1,)},
    )


def triangle() -> EmbeddedGraph:
    """A balanced triangle in the plane x3 = 0 with one balancing leaf per vertex."""
    return EmbeddedGraph(
        ambient_dim=3,
        vertices=[Vertex("A"), Vertex("B"), Vertex("C")],
        edges=[
            Edge("AB", ("A", "B")),
            Edge("BC", ("B", "C")),
            Edge("CA", ("C", "A")),
        ],
        leaves=[Leaf("lA", "A"), Leaf("lB", "B"), Leaf("lC", "C")],
        positions={"A": (0, 0, 0), "B": (1, 0, 0), "C": (0, 1, 0)},
        leaf_directions={"lA": (-1, -1, 0), "lB": (2, -1, 0), "lC": (-1, 2, 0)},
    )


def elliptic(a=1, b=2, c=3, d=1) -> EmbeddedGraph:
    """Unit-square cycle in the plane x3 = 0 with three escape routes.

    The boundary of the plane part sits at distance ``a + d`` (through the
    bend vertex J), ``b``, and ``c`` from the cycle.  All interior vertices
    are trivalent; every vertex of the plane part is genus 0.
    """
    a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
    if min(a, b, c, d) <= 0:
        raise ValueError("all four lengths must be positive")
    vertices = [Vertex(v) for v in
                ("X1", "X2", "X3", "X4", "J", "Aend", "Bend", "Cend")]
    edges = [
        Edge("cyc1", ("X1", "X2")),
        Edge("cyc2", ("X2", "X3")),
        Edge("cyc3", ("X3", "X4")),
        Edge("cyc4", ("X4", "X1")),
        Edge("b", ("X1", "Bend"), 1, b),
        Edge("c", ("X2", "Cend"), 1, c),
        Edge("d", ("X3", "J"), 1, d),
        Edge("a", ("J", "Aend"), 1, a),
    ]
    leaves = [
        Leaf("ray_x4", "X4"),
        Leaf("ray_j", "J"),
        Leaf("out_a1", "Aend"), Leaf("out_a2", "Aend"),
        Leaf("out_b1", "Bend"), Leaf("out_b2", "Bend"),
        Leaf("out_c1", "Cend"), Leaf("out_c2", "Cend"),
    ]
    positions = {
        "X1": (0, 0, 0), "X2": (1, 0, 0), "X3": (1, 1, 0), "X4": (0, 1, 0),
        "J": (1 + d, 1 + d, 0),
        "Aend": (1 + d, 1 + d + a, 0),
        "Bend": (-b, -b, 0),
        "Cend": (1 + c, -c, 0),
    }
    leaf_directions = {
        "ray_x4": (-1, 1, 0),
        "ray_j": (1, 0, 0),
        "out_a1": (0, 1, 1), "out_a2": (0, 0, -1),
        "out_b1": (-1, -1, 1), "out_b2": (0, 0, -1),
        "out_c1": (1, -1, 1), "out_c2": (0, 0, -1),
    }
    return EmbeddedGraph(3, vertices, edges, leaves, positions, leaf_directions)


def genus3() -> EmbeddedGraph:
    """Three triangles on a quadrivalent hub, each with two long escape chains.

    The plane part has first Betti number 3; the eight boundary vertices
    carry leaf pairs leaving the plane.  Every vertex is indecomposable and
    every edge has multiplicity 1.  The chains have length 8, which is long
    enough that a descending route through them cannot feed a triangle.
    """
    pts = {
        "q": (0, 0), "o": (-1, 1), "L1": (-2, 1), "L2": (-1, 2),
        "ut": (2, 1), "pt": (3, 2), "rt": (3, 1), "Et1": (11, 18), "Et2": (11, -7),
        "um": (-1, -1), "pm": (-2, -1), "rm": (-1, -2), "Em1": (-18, 7), "Em2": (7, -18),
        "ub": (0, -1), "pb": (1, -3), "rb": (-1, 0), "Eb1": (25, -43), "Eb2": (-25, 32),
    }
    vertices = [Vertex(v) for v in sorted(pts)]
    edges = [
        Edge("a", ("q", "o")),
        Edge("f1", ("o", "L1")),
        Edge("f2", ("o", "L2")),
        Edge("b", ("q", "ut")),
        Edge("c", ("q", "um")),
        Edge("d", ("q", "ub")),
        Edge("t_up", ("ut", "pt")),
        Edge("t_dn", ("ut", "rt")),
        Edge("t_cl", ("pt", "rt")),
        Edge("t_ch1", ("pt", "Et1"), 1, 8),
        Edge("t_ch2", ("rt", "Et2"), 1, 8),
        Edge("m_up", ("um", "pm")),
        Edge("m_dn", ("um", "rm")),
        Edge("m_cl", ("pm", "rm")),
        Edge("m_ch1", ("pm", "Em1"), 1, 8),
        Edge("m_ch2", ("rm", "Em2"), 1, 8),
        Edge("b_up", ("ub", "pb")),
        Edge("b_dn", ("ub", "rb")),
        Edge("b_cl", ("pb", "rb")),
        Edge("b_ch1", ("pb", "Eb1"), 1, 8),
        Edge("b_ch2", ("rb", "Eb2"), 1, 8),
    ]
    outward = {
        "L1": (-1, 0), "L2": (0, 1),
        "Et1": (1, 2), "Et2": (1, -1),
        "Em1": (-2, 1), "Em2": (1, -2),
        "Eb1": (3, -5), "Eb2": (-3, 4),
    }
    leaves = []
    leaf_directions = {}
    for v in sorted(outward):
        wx, wy = outward[v]
        leaves.append(Leaf(f"{v}a", v))
        leaves.append(Leaf(f"{v}b", v))
        leaf_directions[f"{v}a"] = (wx, wy, 1)
        leaf_directions[f"{v}b"] = (0, 0, -1)
    positions = {v: (x, y, 0) for v, (x, y) in pts.items()}
    return EmbeddedGraph(3, vertices, edges, leaves, positions, leaf_directions)


def single_boundary_cycle() -> EmbeddedGraph:
    """A plane triangle reached through one edge from a single trivalent vertex.

    The level set of the plane normal through the triangle has first Betti
    number 1 and exactly one boundary vertex, which is trivalent in the
    ambient graph.
    """
    vertices = [Vertex(v) for v in ("v", "z1", "z2", "z3")]
    edges = [
        Edge("e", ("v", "z1")),
        Edge("k1", ("z1", "z2")),
        Edge("k2", ("z1", "z3")),
        Edge("k3", ("z2", "z3")),
    ]
    leaves = [Leaf("va", "v"), Leaf("vb", "v"), Leaf("z2r", "z2"), Leaf("z3r", "z3")]
    positions = {"v": (0, 0, 0), "z1": (1, 0, 0), "z2": (2, 1, 0), "z3": (1, -1, 0)}
    leaf_directions = {
        "va": (-1, 0, 1), "vb": (0, 0, -1),
        "z2r": (2, 3, 0), "z3r": (-1, -3, 0),
    }
    return EmbeddedGraph(3, vertices, edges, leaves, positions, leaf_directions)


def theta() -> AbstractGraph:
    """Two vertices joined by three parallel edges."""
    return AbstractGraph(
        vertices=[Vertex("u"), Vertex("w")],
        edges=[Edge("e1", ("u", "w")), Edge("e2", ("u", "w")), Edge("e3", ("u", "w"))],
    )


FIXTURE_BUILDERS = {
    "segment": segment,
    "segment-embedded": segment_embedded,
    "triangle": triangle,
    "elliptic": lambda: elliptic(1, 2, 3, 1),
    "elliptic-bad": lambda: elliptic(1, 1, 3, 1),
    "g3": genus3,
    "t13": single_boundary_cycle,
}


def write_fixture_files(directory):
    """Regenerate the canonical fixture files under ``directory``."""
    import pathlib

    from .fileio import save_graph

    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, builder in FIXTURE_BUILDERS.items():
        save_graph(builder(), directory / f"{name}.json")


if __name__ == "__main__":  # pragma: no cover
    import sys

    write_fixture_files(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
