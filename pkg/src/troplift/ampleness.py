"""Boundary divisors of level subgraphs and section-existence tests.

Given a piecewise-linear function and a bounded connected subgraph sitting
in the interior of a larger subgraph, the boundary divisor records, at each
minimum-level vertex, the negative outward slopes along edges of the larger
subgraph.  The ampleness deciders answer whether the associated nodal curve
of rational components carries a section of that divisor which is
non-constant exactly on the minimum-level components:

* trees and cycles have purely combinatorial answers;
* general genus-0 configurations with at most three special points per
  component are decided by exact rational linear algebra on the section
  spaces (partial-fraction bases, gluing at nodes, dimension comparison);
* beyond that, only a sound necessary test is offered, which can refute but
  never affirm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .divisor import PLFunction, slope_away
from .errors import DispatchError, PreconditionError
from .graph import Subgraph, first_betti, structure_checks
from .lattice import rref

INF_COORD = "inf"


@dataclass(frozen=True)
class BoundaryDivisor:
    """Entries (vertex, boundary edge, multiplicity) at the minimum level."""

    entries: tuple
    min_level: Fraction

    def degree(self) -> int:
        return sum(m for _, _, m in self.entries)

    def vertex_degree(self, v) -> int:
        return sum(m for w, _, m in self.entries if w == v)

    def support_vertices(self):
        return sorted({v for v, _, _ in self.entries})


def _check_interior(gamma: Subgraph, gamma_prime: Subgraph):
    if gamma.graph is not gamma_prime.graph:
        raise PreconditionError("subgraphs must share the same underlying graph")
    if not gamma.is_subset_of(gamma_prime):
        raise PreconditionError("inner subgraph is not contained in the outer one")
    if not gamma.is_bounded():
        raise PreconditionError("inner subgraph must be bounded")
    if not gamma.vertices:
        raise PreconditionError("inner subgraph is empty")
    if len(gamma.components()) != 1:
        raise PreconditionError("inner subgraph must be connected")
    outer_boundary = set(gamma_prime.boundary())
    inside = gamma.vertices & outer_boundary
    if inside:
        raise PreconditionError(
            f"inner subgraph touches the boundary of the outer one at {sorted(inside)}")


def boundary_divisor(phi: PLFunction, gamma: Subgraph, gamma_prime: Subgraph) -> BoundaryDivisor:
    """Negative outward slopes along outer edges at minimum-level vertices."""
    _check_interior(gamma, gamma_prime)
    g = gamma.graph
    h = min(phi.value(v) for v in gamma.vertices)
    entries = []
    for v in sorted(gamma.vertices):
        if phi.value(v) != h:
            continue
        for eid in g.incident_edges(v):
            if eid in gamma.edges or eid not in gamma_prime.edges:
                continue
            s = slope_away(g, phi, v, eid)
            if s < 0:
                entries.append((v, eid, -s))
    return BoundaryDivisor(tuple(entries), h)


@dataclass(frozen=True)
class AmplenessVerdict:
    status: str   # "ample" | "not_ample" | "indeterminate"
    method: str   # "tree" | "cycle" | "general-linear-algebra" | "necessary-only" | "dispatch"
    detail: str = ""

    @property
    def is_ample(self):
        return self.status == "ample"


def _min_level_vertices(phi, gamma):
    h = min(phi.value(v) for v in gamma.vertices)
    return h, sorted(v for v in gamma.vertices if phi.value(v) == h)


def ample_tree(phi, gamma, gamma_prime, genus_marks=None) -> AmplenessVerdict:
    """Exact decision for trees of rational components."""
    marks = genus_marks or {v: gamma.graph.vertices[v].genus for v in gamma.vertices}
    rep = structure_checks(gamma)
    if first_betti(gamma) != 0 or any(marks.get(v, 0) for v in gamma.vertices):
        raise DispatchError("tree decider needs a genus-0 tree")
    del rep
    div = boundary_divisor(phi, gamma, gamma_prime)
    _, mins = _min_level_vertices(phi, gamma)
    for v in mins:
        if div.vertex_degree(v) < 1:
            return AmplenessVerdict("not_ample", "tree",
                                    f"minimum-level vertex {v} receives no entry")
    return AmplenessVerdict("ample", "tree")


def ample_cycle(phi, gamma, gamma_prime, genus_marks=None) -> AmplenessVerdict:
    """Exact decision for a cycle of rational components."""
    marks = genus_marks or {v: gamma.graph.vertices[v].genus for v in gamma.vertices}
    rep = structure_checks(gamma)
    if not rep.is_cycle or any(marks.get(v, 0) for v in gamma.vertices):
        raise DispatchError("cycle decider needs a genus-0 cycle")
    div = boundary_divisor(phi, gamma, gamma_prime)
    if div.degree() < 2:
        return AmplenessVerdict("not_ample", "cycle",
                                f"total boundary degree {div.degree()} < 2")
    _, mins = _min_level_vertices(phi, gamma)
    for v in mins:
        if div.vertex_degree(v) < 1:
            return AmplenessVerdict("not_ample", "cycle",
                                    f"minimum-level vertex {v} receives no entry")
    return AmplenessVerdict("ample", "cycle")


def _special_points(gamma, div, mins):
    """Per-vertex coordinates of nodes and poles; None when a vertex has > 3.

    Each vertex's special points are placed at 0, 1, infinity in a canonical
    incidence order, which is legitimate because three points on a rational
    component can always be normalized that way.
    """
    g = gamma.graph
    pool = [Fraction(0), Fraction(1), INF_COORD]
    node_coords = {}
    pole_coords = {}
    for v in sorted(gamma.vertices):
        incidences = []
        for eid in sorted(gamma.edges):
            a, b = g.edges[eid].ends
            if a == v:
                incidences.append(("node", eid, 0))
            if b == v:
                incidences.append(("node", eid, 1))
        poles = sorted({eid for w, eid, _ in div.entries if w == v})
        slots = incidences + [("pole", eid, 0) for eid in poles]
        if len(slots) > 3:
            return None, None, v
        for coord, slot in zip(pool, slots):
            kind, eid, end = slot
            if kind == "node":
                node_coords[(v, eid, end)] = coord
            else:
                pole_coords[(v, eid)] = coord
    return node_coords, pole_coords, None


def _basis_for_vertex(v, div, pole_coords, is_min):
    """Variable descriptors for the section space on the component of ``v``."""
    out = [("const", v)]
    if not is_min:
        return out
    mults = {}
    for w, eid, m in div.entries:
        if w == v:
            mults[eid] = mults.get(eid, 0) + m
    for eid in sorted(mults):
        for j in range(1, mults[eid] + 1):
            out.append(("pole", v, eid, j))
    return out


def _eval_basis(var, coord, pole_coords):
    """Value of a basis function at a node coordinate of its component."""
    if var[0] == "const":
        return Fraction(1)
    _, v, eid, j = var
    p = pole_coords[(v, eid)]
    if p == INF_COORD:
        if coord == INF_COORD:
            raise PreconditionError("node collides with a pole at infinity")
        return Fraction(coord) ** j
    if coord == INF_COORD:
        return Fraction(0)
    if coord == p:
        raise PreconditionError("node collides with a pole")
    return Fraction(1) / (Fraction(coord) - p) ** j


def _rank(matrix):
    if not matrix:
        return 0
    work = [list(r) for r in matrix]
    return len(rref(work))


def ample_general(phi, gamma, gamma_prime, genus_marks=None) -> AmplenessVerdict:
    """Exact decision for genus-0 configurations via section-space linear algebra."""
    g = gamma.graph
    marks = genus_marks or {v: g.vertices[v].genus for v in gamma.vertices}
    if any(marks.get(v, 0) for v in gamma.vertices):
        raise DispatchError("general decider needs all genus marks zero")
    div = boundary_divisor(phi, gamma, gamma_prime)
    _, mins = _min_level_vertices(phi, gamma)
    node_coords, pole_coords, offender = _special_points(gamma, div, mins)
    if offender is not None:
        return AmplenessVerdict(
            "indeterminate", "general-linear-algebra",
            f"vertex {offender} has more than 3 special points; the answer depends "
            f"on moduli of the component that are not determined by the graph")

    min_set = set(mins)
    variables = []
    for v in sorted(gamma.vertices):
        variables.extend(_basis_for_vertex(v, div, pole_coords, v in min_set))
    index = {var: i for i, var in enumerate(variables)}

    rows = []
    for eid in sorted(gamma.edges):
        a, b = g.edges[eid].ends
        row = [Fraction(0)] * len(variables)
        for var in variables:
            owner = var[1]
            if owner == a:
                row[index[var]] += _eval_basis(var, node_coords[(a, eid, 0)], pole_coords)
            if owner == b:
                row[index[var]] -= _eval_basis(var, node_coords[(b, eid, 1)], pole_coords)
        rows.append(row)

    rank = _rank(rows)
    dim_w = len(variables) - rank
    for v in mins:
        extra = []
        for var in variables:
            if var[0] == "pole" and var[1] == v:
                row = [Fraction(0)] * len(variables)
                row[index[var]] = Fraction(1)
                extra.append(row)
        if not extra:
            return AmplenessVerdict("not_ample", "general-linear-algebra",
                                    f"minimum-level vertex {v} has no section poles")
        dim_wv = len(variables) - _rank(rows + extra)
        if dim_wv >= dim_w:
            return AmplenessVerdict(
                "not_ample", "general-linear-algebra",
                f"every gluing section is constant on the component of {v}")
    return AmplenessVerdict("ample", "general-linear-algebra")


def ample_necessary(phi, gamma, gamma_prime, genus_marks=None) -> AmplenessVerdict:
    """Sound refutation for 2-vertex-connected subgraphs without 1-valent vertices."""
    rep = structure_checks(gamma)
    if not rep.two_vertex_connected or rep.has_one_valent_vertex:
        raise DispatchError("necessary test needs a 2-vertex-connected subgraph "
                            "with no 1-valent vertices")
    div = boundary_divisor(phi, gamma, gamma_prime)
    if div.degree() < 2:
        return AmplenessVerdict("not_ample", "necessary-only",
                                f"total boundary degree {div.degree()} < 2")
    _, mins = _min_level_vertices(phi, gamma)
    for v in mins:
        if div.vertex_degree(v) < 1:
            return AmplenessVerdict("not_ample", "necessary-only",
                                    f"minimum-level vertex {v} receives no entry")
    return AmplenessVerdict("indeterminate", "necessary-only",
                            "necessary conditions hold; sufficiency not decided")


def ample(phi, gamma, gamma_prime, genus_marks=None) -> AmplenessVerdict:
    """Dispatch to the sharpest applicable decider; never affirms inexactly."""
    g = gamma.graph
    marks = genus_marks or {v: g.vertices[v].genus for v in gamma.vertices}
    _check_interior(gamma, gamma_prime)
    if any(marks.get(v, 0) for v in gamma.vertices):
        return AmplenessVerdict("indeterminate", "dispatch",
                                "components of positive genus are not decided")
    rep = structure_checks(gamma)
    if rep.is_cycle:
        return ample_cycle(phi, gamma, gamma_prime, marks)
    if first_betti(gamma) == 0:
        return ample_tree(phi, gamma, gamma_prime, marks)
    verdict = ample_general(phi, gamma, gamma_prime, marks)
    if verdict.status != "indeterminate":
        return verdict
    if rep.two_vertex_connected and not rep.has_one_valent_vertex:
        return ample_necessary(phi, gamma, gamma_prime, marks)
    return verdict
