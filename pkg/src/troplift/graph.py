"""Genus-marked weighted graphs, balanced embedded graphs, and subgraphs.

An :class:`AbstractGraph` is a finite multigraph with genus marks on the
vertices, non-negative integer multiplicities and positive rational lengths
on bounded edges, and unbounded leaves anchored at vertices.  Multiplicity 0
marks a contracted edge; contracted edges still carry a length.

An :class:`EmbeddedGraph` adds rational positions in Q^n and primitive
integer leaf directions, subject to the dilation invariant

    position(w) - position(v) = lattice_length(e) * primitive(e),
    lattice_length(e) = multiplicity(e) * length(e),

for every non-contracted bounded edge e = vw.  Balancedness is *not* a
construction invariant (it is a checkable verdict); file loaders reject
unbalanced input separately.

The metric on a graph assigns each bounded edge its stored length (the
lattice length divided by the multiplicity) and parameterizes each leaf by
[0, infinity).  Distances of paths through leaves are measured along that
parameter.  Unreachable distances are reported as ``math.inf`` -- the one
non-rational sentinel in the package; every measured quantity is exact.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError, PreconditionError
from .lattice import (
    is_primitive,
    is_zero_vec,
    make_primitive,
    vec_add,
    vec_dot,
    vec_scale,
    vec_sub,
)


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    multiplicity: int = 1
    length: Fraction = Fraction(1)


@dataclass(frozen=True)
class Leaf:
    id: str
    vertex: str
    multiplicity: int = 1


class AbstractGraph:
    """Genus-marked weighted multigraph with leaves.  Immutable after init."""

    def __init__(self, vertices, edges=(), leaves=()):
        self.vertices: dict[str, Vertex] = {}
        self.edges: dict[str, Edge] = {}
        self.leaves: dict[str, Leaf] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise InvariantError(f"duplicate vertex id {v.id!r}")
            if v.genus < 0:
                raise InvariantError(f"vertex {v.id!r} has negative genus")
            self.vertices[v.id] = v
        for e in edges:
            if e.id in self.edges:
                raise InvariantError(f"duplicate edge id {e.id!r}")
            for end in e.ends:
                if end not in self.vertices:
                    raise InvariantError(f"edge {e.id!r} references unknown vertex {end!r}")
            if e.multiplicity < 0:
                raise InvariantError(f"edge {e.id!r} has negative multiplicity")
            if e.length <= 0:
                raise InvariantError(f"edge {e.id!r} must have positive length")
            self.edges[e.id] = Edge(e.id, tuple(e.ends), e.multiplicity, Fraction(e.length))
        for l in leaves:
            if l.id in self.leaves or l.id in self.edges:
                raise InvariantError(f"duplicate leaf id {l.id!r}")
            if l.vertex not in self.vertices:
                raise InvariantError(f"leaf {l.id!r} references unknown vertex {l.vertex!r}")
            if l.multiplicity < 0:
                raise InvariantError(f"leaf {l.id!r} has negative multiplicity")
            self.leaves[l.id] = l
        self._incident_edges: dict[str, list[str]] = {v: [] for v in self.vertices}
        self._incident_leaves: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            self._incident_edges[e.ends[0]].append(e.id)
            if e.ends[1] != e.ends[0]:
                self._incident_edges[e.ends[1]].append(e.id)
        for l in self.leaves.values():
            self._incident_leaves[l.vertex].append(l.id)
        for adj in self._incident_edges.values():
            adj.sort()
        for adj in self._incident_leaves.values():
            adj.sort()

    def vertex_ids(self):
        return sorted(self.vertices)

    def edge_ids(self):
        return sorted(self.edges)

    def leaf_ids(self):
        return sorted(self.leaves)

    def incident_edges(self, v):
        return list(self._incident_edges[v])

    def incident_leaves(self, v):
        return list(self._incident_leaves[v])

    def degree(self, v) -> int:
        """Number of edge ends and leaves at ``v`` (a loop counts twice)."""
        d = len(self._incident_leaves[v])
        for eid in self._incident_edges[v]:
            ends = self.edges[eid].ends
            d += 2 if ends[0] == ends[1] else 1
        return d

    def genus_mark(self, v) -> int:
        return self.vertices[v].genus

    def other_end(self, eid, v):
        a, b = self.edges[eid].ends
        if v == a:
            return b
        if v == b:
            return a
        raise InvariantError(f"vertex {v!r} is not an end of edge {eid!r}")

    def __eq__(self, other):
        return (
            type(self) is AbstractGraph
            and type(other) is AbstractGraph
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.leaves == other.leaves
        )

    def __repr__(self):
        return (f"{type(self).__name__}({len(self.vertices)} vertices, "
                f"{len(self.edges)} edges, {len(self.leaves)} leaves)")


class EmbeddedGraph(AbstractGraph):
    """Balanced-checkable graph in Q^n; positions validated against edge data."""

    def __init__(self, ambient_dim, vertices, edges=(), leaves=(), positions=None,
                 leaf_directions=None):
        super().__init__(vertices, edges, leaves)
        if ambient_dim < 1:
            raise InvariantError("ambient dimension must be positive")
        self.ambient_dim = int(ambient_dim)
        positions = dict(positions or {})
        leaf_directions = dict(leaf_directions or {})
        self.positions: dict[str, tuple[Fraction, ...]] = {}
        self.leaf_directions: dict[str, tuple[int, ...]] = {}
        for vid in self.vertices:
            if vid not in positions:
                raise InvariantError(f"missing position for vertex {vid!r}")
            pos = tuple(Fraction(x) for x in positions[vid])
            if len(pos) != self.ambient_dim:
                raise InvariantError(f"position of {vid!r} has wrong dimension")
            self.positions[vid] = pos
        for lid, leaf in self.leaves.items():
            if lid not in leaf_directions:
                raise InvariantError(f"missing direction for leaf {lid!r}")
            direction = tuple(int(x) for x in leaf_directions[lid])
            if len(direction) != self.ambient_dim:
                raise InvariantError(f"direction of leaf {lid!r} has wrong dimension")
            if is_zero_vec(direction) or not is_primitive(direction):
                raise InvariantError(f"leaf {lid!r} direction must be a primitive integer vector")
            self.leaf_directions[lid] = direction
        for e in self.edges.values():
            disp = self.displacement(e.id)
            if e.multiplicity == 0:
                if not is_zero_vec(disp):
                    raise InvariantError(
                        f"contracted edge {e.id!r} must have coinciding endpoint positions")
                continue
            if is_zero_vec(disp):
                raise InvariantError(f"edge {e.id!r} has zero displacement but multiplicity "
                                     f"{e.multiplicity}")
            prim = make_primitive(disp)
            lat = None
            for d, p in zip(disp, prim):
                if p != 0:
                    lat = Fraction(d) / p
                    break
            if any(Fraction(d) != lat * p for d, p in zip(disp, prim)):
                raise InvariantError(f"edge {e.id!r} displacement is not a rational multiple "
                                     f"of a primitive vector")
            if lat != e.multiplicity * e.length:
                raise InvariantError(
                    f"edge {e.id!r}: lattice length {lat} != multiplicity*length "
                    f"{e.multiplicity * e.length}")

    def displacement(self, eid):
        a, b = self.edges[eid].ends
        return vec_sub(self.positions[b], self.positions[a])

    def lattice_length(self, eid):
        e = self.edges[eid]
        return e.multiplicity * e.length

    def primitive_away(self, eid, v):
        """Primitive direction of edge ``eid`` oriented away from endpoint ``v``."""
        e = self.edges[eid]
        if e.multiplicity == 0:
            raise InvariantError(f"contracted edge {eid!r} has no direction")
        disp = self.displacement(eid)
        prim = make_primitive(disp)
        if v == e.ends[0]:
            return prim
        if v == e.ends[1]:
            return tuple(-x for x in prim)
        raise InvariantError(f"vertex {v!r} is not an end of edge {eid!r}")

    def __eq__(self, other):
        return (
            isinstance(other, EmbeddedGraph)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.leaves == other.leaves
            and self.positions == other.positions
            and self.leaf_directions == other.leaf_directions
        )


@dataclass(frozen=True)
class BalanceVerdict:
    ok: bool
    residuals: dict[str, tuple[Fraction, ...]] = field(default_factory=dict)


def check_balanced(g: EmbeddedGraph) -> BalanceVerdict:
    """Check the weighted balancing condition at every vertex.

    Returns per-vertex residual vectors for the vertices that fail.
    """
    residuals = {}
    for lid, direction in g.leaf_directions.items():
        if not is_primitive(direction):
            raise InvariantError(f"leaf {lid!r} direction is not primitive")
    for v in g.vertex_ids():
        total = tuple(Fraction(0) for _ in range(g.ambient_dim))
        for eid in g.incident_edges(v):
            e = g.edges[eid]
            if e.multiplicity == 0:
                continue
            if e.ends[0] == e.ends[1]:
                continue  # a non-contracted loop cannot embed; constructor rejects it
            total = vec_add(total, vec_scale(e.multiplicity, g.primitive_away(eid, v)))
        for lid in g.incident_leaves(v):
            leaf = g.leaves[lid]
            total = vec_add(total, vec_scale(leaf.multiplicity, g.leaf_directions[lid]))
        if not is_zero_vec(total):
            residuals[v] = total
    return BalanceVerdict(ok=not residuals, residuals=residuals)


# ---------------------------------------------------------------------------
# Subgraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgraph:
    """A subset of vertices, whole bounded edges, and whole leaves of a graph.

    ``graph`` may be a derived graph in which cut points of the parent were
    materialized as ordinary 2-valent vertices; those are listed in
    ``virtual_vertices``.
    """

    graph: AbstractGraph
    vertices: frozenset
    edges: frozenset = frozenset()
    leaves: frozenset = frozenset()
    virtual_vertices: frozenset = frozenset()

    def __post_init__(self):
        for eid in self.edges:
            a, b = self.graph.edges[eid].ends
            if a not in self.vertices or b not in self.vertices:
                raise InvariantError(f"subgraph edge {eid!r} has an endpoint outside the subgraph")
        for lid in self.leaves:
            if self.graph.leaves[lid].vertex not in self.vertices:
                raise InvariantError(f"subgraph leaf {lid!r} is anchored outside the subgraph")

    @classmethod
    def from_elements(cls, graph, edges=(), leaves=(), extra_vertices=(), virtual_vertices=()):
        verts = set(extra_vertices)
        for eid in edges:
            verts.update(graph.edges[eid].ends)
        for lid in leaves:
            verts.add(graph.leaves[lid].vertex)
        return cls(graph, frozenset(verts), frozenset(edges), frozenset(leaves),
                   frozenset(virtual_vertices))

    def is_bounded(self) -> bool:
        return not self.leaves

    def degree(self, v) -> int:
        d = sum(1 for lid in self.graph.incident_leaves(v) if lid in self.leaves)
        for eid in self.graph.incident_edges(v):
            if eid in self.edges:
                ends = self.graph.edges[eid].ends
                d += 2 if ends[0] == ends[1] else 1
        return d

    def boundary(self):
        """Vertices of the subgraph meeting parent edges or leaves outside it."""
        out = []
        for v in sorted(self.vertices):
            ext = any(eid not in self.edges for eid in self.graph.incident_edges(v)) or \
                any(lid not in self.leaves for lid in self.graph.incident_leaves(v))
            if ext:
                out.append(v)
        return out

    def components(self):
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for eid in self.edges:
            a, b = self.graph.edges[eid].ends
            union(a, b)
        groups: dict[str, set] = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        comps = []
        for root in sorted(groups, key=lambda r: min(groups[r])):
            verts = groups[root]
            comps.append(Subgraph(
                self.graph,
                frozenset(verts),
                frozenset(e for e in self.edges if self.graph.edges[e].ends[0] in verts),
                frozenset(l for l in self.leaves if self.graph.leaves[l].vertex in verts),
                frozenset(v for v in self.virtual_vertices if v in verts),
            ))
        return comps

    def contains_vertex(self, v):
        return v in self.vertices

    def is_subset_of(self, other: "Subgraph") -> bool:
        return (self.graph is other.graph and self.vertices <= other.vertices
                and self.edges <= other.edges and self.leaves <= other.leaves)


def whole_graph(g: AbstractGraph) -> Subgraph:
    return Subgraph(g, frozenset(g.vertices), frozenset(g.edges), frozenset(g.leaves))


# ---------------------------------------------------------------------------
# Basic invariants
# ---------------------------------------------------------------------------

def _component_count(vertices, edge_ends):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edge_ends:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in vertices})


def first_betti(g) -> int:
    """|bounded edges| - |vertices| + number of connected components."""
    if isinstance(g, Subgraph):
        vertices = g.vertices
        ends = [g.graph.edges[e].ends for e in g.edges]
    else:
        vertices = set(g.vertices)
        ends = [e.ends for e in g.edges.values()]
    if not vertices:
        return 0
    return len(ends) - len(vertices) + _component_count(vertices, ends)


def total_genus(g) -> int:
    """First Betti number plus the genus marks of the vertices."""
    if isinstance(g, Subgraph):
        marks = sum(g.graph.vertices[v].genus for v in g.vertices)
    else:
        marks = sum(v.genus for v in g.vertices.values())
    return first_betti(g) + marks


# ---------------------------------------------------------------------------
# Subdivision
# ---------------------------------------------------------------------------

def subdivide(g, l: int):
    """Replace every bounded edge by ``l`` segments of the original length.

    For embedded graphs all positions are scaled by ``l``; inserted vertices
    are genus 0 and inherit the edge multiplicity.  Leaf directions are
    unchanged.  ``l = 1`` returns the graph itself.
    """
    if l < 1:
        raise PreconditionError("subdivision factor must be a positive integer")
    if l == 1:
        return g
    vertices = [Vertex(v.id, v.genus) for v in g.vertices.values()]
    edges = []
    for e in sorted(g.edges.values(), key=lambda e: e.id):
        chain = [e.ends[0]] + [f"{e.id}@{i}" for i in range(1, l)] + [e.ends[1]]
        for mid in chain[1:-1]:
            vertices.append(Vertex(mid, 0))
        for i in range(l):
            edges.append(Edge(f"{e.id}#{i}", (chain[i], chain[i + 1]), e.multiplicity, e.length))
    leaves = [Leaf(lf.id, lf.vertex, lf.multiplicity) for lf in g.leaves.values()]
    if not isinstance(g, EmbeddedGraph):
        return AbstractGraph(vertices, edges, leaves)
    positions = {v: vec_scale(l, pos) for v, pos in g.positions.items()}
    for e in sorted(g.edges.values(), key=lambda e: e.id):
        start = positions[e.ends[0]]
        disp = vec_scale(l, g.displacement(e.id))
        for i in range(1, l):
            positions[f"{e.id}@{i}"] = vec_add(start, vec_scale(Fraction(i, l), disp))
    return EmbeddedGraph(g.ambient_dim, vertices, edges, leaves, positions,
                         dict(g.leaf_directions))


# ---------------------------------------------------------------------------
# Level preimages
# ---------------------------------------------------------------------------

def level_value(g: EmbeddedGraph, m, v):
    return vec_dot(m, g.positions[v])


def edge_pairing(g: EmbeddedGraph, m, eid):
    """Inner product of ``m`` with the displacement of the edge."""
    return vec_dot(m, g.displacement(eid))


def leaf_pairing(g: EmbeddedGraph, m, lid):
    return vec_dot(m, g.leaf_directions[lid])


def level_preimage(g: EmbeddedGraph, m, c) -> Subgraph:
    """The subgraph of points whose position pairs with ``m`` to ``c``.

    Edges orthogonal to ``m`` at level ``c`` are included whole; an edge or
    leaf crossing level ``c`` transversally contributes its single crossing
    point, materialized as a genus-0 virtual vertex of a derived graph.
    """
    m = tuple(m)
    if is_zero_vec(m):
        raise PreconditionError("level_preimage needs a nonzero direction")
    c = Fraction(c)
    level = {v: level_value(g, m, v) for v in g.vertices}

    sub_vertices = {v for v in g.vertices if level[v] == c}
    sub_edges = set()
    sub_leaves = set()
    cut_edges = {}   # eid -> crossing parameter in (0,1)
    cut_leaves = {}  # lid -> crossing parameter in (0,inf)

    for eid in g.edge_ids():
        e = g.edges[eid]
        a, b = e.ends
        pairing = level[b] - level[a]
        if pairing == 0:
            if level[a] == c:
                sub_edges.add(eid)
        else:
            t = (c - level[a]) / pairing
            if 0 < t < 1:
                cut_edges[eid] = t
    for lid in g.leaf_ids():
        leaf = g.leaves[lid]
        anchor = leaf.vertex
        pairing = leaf_pairing(g, m, lid)
        if pairing == 0 or leaf.multiplicity == 0:
            if level[anchor] == c:
                sub_leaves.add(lid)
        else:
            t = (c - level[anchor]) / pairing
            if t > 0:
                cut_leaves[lid] = t

    if not cut_edges and not cut_leaves:
        return Subgraph(g, frozenset(sub_vertices), frozenset(sub_edges), frozenset(sub_leaves))

    # Materialize crossing points in a derived graph.
    vertices = [Vertex(v.id, v.genus) for v in g.vertices.values()]
    edges = []
    leaves = []
    positions = dict(g.positions)
    leaf_directions = dict(g.leaf_directions)
    virtual = set()
    for eid in g.edge_ids():
        e = g.edges[eid]
        if eid in cut_edges:
            t = cut_edges[eid]
            cut = f"cut:{eid}"
            virtual.add(cut)
            vertices.append(Vertex(cut, 0))
            positions[cut] = vec_add(g.positions[e.ends[0]],
                                     vec_scale(t, g.displacement(eid)))
            edges.append(Edge(f"{eid}:lo", (e.ends[0], cut), e.multiplicity, t * e.length))
            edges.append(Edge(f"{eid}:hi", (cut, e.ends[1]), e.multiplicity, (1 - t) * e.length))
        else:
            edges.append(e)
    for lid in g.leaf_ids():
        leaf = g.leaves[lid]
        if lid in cut_leaves:
            t = cut_leaves[lid]
            cut = f"cut:{lid}"
            virtual.add(cut)
            vertices.append(Vertex(cut, 0))
            direction = g.leaf_directions[lid]
            positions[cut] = vec_add(g.positions[leaf.vertex], vec_scale(t, direction))
            # stub from the anchor to the crossing point; lattice length t
            edges.append(Edge(f"{lid}:stub", (leaf.vertex, cut), leaf.multiplicity,
                              t / leaf.multiplicity))
            leaves.append(Leaf(lid, cut, leaf.multiplicity))
            leaf_directions[lid] = direction
        else:
            leaves.append(leaf)
    derived = EmbeddedGraph(g.ambient_dim, vertices, edges, leaves, positions, leaf_directions)
    sub_vertices |= virtual
    return Subgraph(derived, frozenset(sub_vertices), frozenset(sub_edges),
                    frozenset(sub_leaves), frozenset(virtual))


# ---------------------------------------------------------------------------
# Metric distance
# ---------------------------------------------------------------------------

def vertex_point(v):
    return ("vertex", v)


def edge_point(eid, t):
    return ("edge", eid, Fraction(t))


def leaf_point(lid, t):
    return ("leaf", lid, Fraction(t))


def metric_distance(g, x, gamma: Subgraph):
    """Infimum of path lengths from a point to a subgraph; ``math.inf`` if none.

    Bounded edges contribute their stored length, leaves their parameter.
    """
    if gamma.graph is not g:
        raise PreconditionError("point and subgraph must reference the same graph")
    kind = x[0]
    if kind == "vertex":
        if x[1] in gamma.vertices:
            return Fraction(0)
        seeds = [(Fraction(0), x[1])]
    elif kind == "edge":
        eid, t = x[1], Fraction(x[2])
        if not (0 <= t <= 1):
            raise PreconditionError("edge point parameter must lie in [0, 1]")
        if eid in gamma.edges:
            return Fraction(0)
        e = g.edges[eid]
        if t == 0 and e.ends[0] in gamma.vertices:
            return Fraction(0)
        if t == 1 and e.ends[1] in gamma.vertices:
            return Fraction(0)
        seeds = [(t * e.length, e.ends[0]), ((1 - t) * e.length, e.ends[1])]
    elif kind == "leaf":
        lid, t = x[1], Fraction(x[2])
        if t < 0:
            raise PreconditionError("leaf point parameter must be non-negative")
        if lid in gamma.leaves:
            return Fraction(0)
        anchor = g.leaves[lid].vertex
        if t == 0 and anchor in gamma.vertices:
            return Fraction(0)
        seeds = [(t, anchor)]
    else:
        raise PreconditionError(f"unknown point kind {kind!r}")

    dist = {}
    heap = []
    for d, v in seeds:
        if v not in dist or d < dist[v]:
            dist[v] = d
            heapq.heappush(heap, (d, v))
    while heap:
        d, v = heapq.heappop(heap)
        if dist.get(v) != d:
            continue
        if v in gamma.vertices:
            return d
        for eid in g.incident_edges(v):
            e = g.edges[eid]
            if eid in gamma.edges:
                return d  # entering the subgraph through one of its edges
            w = e.ends[1] if v == e.ends[0] else e.ends[0]
            nd = d + e.length
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return math.inf


# ---------------------------------------------------------------------------
# Structure checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    two_vertex_connected: bool
    complement_is_forest: bool
    is_cycle: bool
    has_one_valent_vertex: bool


def _cut_vertices(vertices, edges, graph):
    """Cut vertices of the multigraph (loops ignored); iterative Hopcroft-Tarjan."""
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    for eid in edges:
        a, b = graph.edges[eid].ends
        if a == b:
            continue
        adj[a].append((eid, b))
        adj[b].append((eid, a))
    for lst in adj.values():
        lst.sort()
    disc, low, cuts = {}, {}, set()
    counter = [0]
    for root in sorted(vertices):
        if root in disc:
            continue
        stack = [(root, None, iter(adj[root]))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        root_children = 0
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for eid, w in it:
                if eid == in_edge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter[0]
                    counter[0] += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if parent != root and low[v] >= disc[parent]:
                        cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts


def _is_two_vertex_connected(sub: Subgraph) -> bool:
    verts = sub.vertices
    if not verts:
        return False
    if _component_count(verts, [sub.graph.edges[e].ends for e in sub.edges]) != 1:
        return False
    nonloop = [e for e in sub.edges if sub.graph.edges[e].ends[0] != sub.graph.edges[e].ends[1]]
    if len(verts) == 1:
        return len(sub.edges) >= 1  # a loop
    if len(verts) == 2:
        return len(nonloop) >= 2  # parallel pair
    if _cut_vertices(verts, nonloop, sub.graph):
        return False
    return len(nonloop) >= len(verts)


def structure_checks(gamma: Subgraph) -> StructureReport:
    """Shape predicates for a subgraph and its complement in the parent."""
    g = gamma.graph
    connected = bool(gamma.vertices) and _component_count(
        gamma.vertices, [g.edges[e].ends for e in gamma.edges]) == 1

    comp_edges = [eid for eid in g.edges if eid not in gamma.edges]
    comp_vertices = set(g.vertices) - gamma.vertices
    for eid in comp_edges:
        comp_vertices.update(g.edges[eid].ends)
    if comp_vertices:
        betti = len(comp_edges) - len(comp_vertices) + _component_count(
            comp_vertices, [g.edges[e].ends for e in comp_edges])
    else:
        betti = 0
    complement_is_forest = betti == 0

    degrees = {v: gamma.degree(v) for v in gamma.vertices}
    edge_degrees = {}
    for v in gamma.vertices:
        d = 0
        for eid in g.incident_edges(v):
            if eid in gamma.edges:
                d += 2 if g.edges[eid].ends[0] == g.edges[eid].ends[1] else 1
        edge_degrees[v] = d
    is_cycle = (connected and gamma.is_bounded() and len(gamma.edges) >= 1
                and all(d == 2 for d in edge_degrees.values())
                and not gamma.leaves)
    has_one_valent = any(d == 1 for d in degrees.values())
    return StructureReport(
        two_vertex_connected=_is_two_vertex_connected(gamma),
        complement_is_forest=complement_is_forest,
        is_cycle=is_cycle,
        has_one_valent_vertex=has_one_valent,
    )


# ---------------------------------------------------------------------------
# Indecomposability
# ---------------------------------------------------------------------------

def is_indecomposable_vertex(g: EmbeddedGraph, v) -> bool:
    """Whether the balanced star at ``v`` admits no proper balanced splitting.

    Decided by exhaustive enumeration of sub-multisets of the star, which is
    small for the graphs this package handles.
    """
    star = []
    for eid in g.incident_edges(v):
        e = g.edges[eid]
        if e.multiplicity == 0 or e.ends[0] == e.ends[1]:
            continue
        star.append((g.primitive_away(eid, v), e.multiplicity))
    for lid in g.incident_leaves(v):
        leaf = g.leaves[lid]
        if leaf.multiplicity == 0:
            continue
        star.append((g.leaf_directions[lid], leaf.multiplicity))
    total = sum(mu for _, mu in star)
    if total == 0:
        return True
    dim = g.ambient_dim
    balance = [Fraction(0)] * dim
    for w, mu in star:
        for i in range(dim):
            balance[i] += mu * w[i]
    if any(x != 0 for x in balance):
        raise PreconditionError(f"vertex {v!r} is not balanced")

    found = [False]

    def rec(idx, taken, acc):
        if found[0]:
            return
        if idx == len(star):
            if 0 < taken < total and all(x == 0 for x in acc):
                found[0] = True
            return
        w, mu = star[idx]
        for k in range(mu + 1):
            rec(idx + 1, taken + k,
                tuple(a + k * c for a, c in zip(acc, w)))
            if found[0]:
                return

    rec(0, 0, tuple(Fraction(0) for _ in range(dim)))
    return not found[0]


# ---------------------------------------------------------------------------
# Cycle and block enumeration (used by the level-set machinery)
# ---------------------------------------------------------------------------

def simple_cycles(sub: Subgraph, cap=None):
    """All simple cycles of a subgraph as sorted edge-id tuples.

    Loops and parallel-edge pairs count as cycles.  Deterministic order.
    Raises PreconditionError when ``cap`` is exceeded.
    """
    g = sub.graph
    cycles = set()

    def register(edge_set):
        cycles.add(tuple(sorted(edge_set)))
        if cap is not None and len(cycles) > cap:
            raise PreconditionError(f"cycle enumeration exceeded cap {cap}")

    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in sub.vertices}
    for eid in sorted(sub.edges):
        a, b = g.edges[eid].ends
        if a == b:
            register({eid})
            continue
        adj[a].append((eid, b))
        adj[b].append((eid, a))

    order = {v: i for i, v in enumerate(sorted(sub.vertices))}

    def dfs(root, v, visited, path_edges):
        for eid, w in adj[v]:
            if eid in path_edges:
                continue
            if w == root and len(path_edges) >= 1:
                register(set(path_edges) | {eid})
                continue
            if w in visited or order[w] <= order[root]:
                continue
            visited.add(w)
            path_edges.append(eid)
            dfs(root, w, visited, path_edges)
            path_edges.pop()
            visited.remove(w)

    for root in sorted(sub.vertices):
        dfs(root, root, {root}, [])
    return sorted(cycles)


def blocks(sub: Subgraph):
    """Biconnected blocks (edge partition) of a subgraph; loops are singleton blocks."""
    g = sub.graph
    result = []
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in sub.vertices}
    for eid in sorted(sub.edges):
        a, b = g.edges[eid].ends
        if a == b:
            result.append((eid,))
            continue
        adj[a].append((eid, b))
        adj[b].append((eid, a))
    disc, low = {}, {}
    counter = [0]
    edge_stack = []
    for root in sorted(sub.vertices):
        if root in disc:
            continue
        frames = [(root, None, iter(adj[root]))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        while frames:
            v, in_edge, it = frames[-1]
            advanced = False
            for eid, w in it:
                if eid == in_edge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter[0]
                    counter[0] += 1
                    edge_stack.append(eid)
                    frames.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append(eid)
                    low[v] = min(low[v], disc[w])
            if not advanced:
                frames.pop()
                if frames:
                    parent = frames[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] >= disc[parent]:
                        block = []
                        while True:
                            top = edge_stack.pop()
                            block.append(top)
                            if top == in_edge:
                                break
                        result.append(tuple(sorted(block)))
    return sorted(result)
