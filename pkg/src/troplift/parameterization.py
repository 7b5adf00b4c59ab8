"""Maps of genus-marked weighted graphs onto balanced embedded graphs.

A parameterization sends every source vertex to a target vertex and every
source edge either onto a whole target edge (acting as dilation by its
multiplicity) or to a point.  Verification checks the four defining
conditions: dilation, balancing of the pulled-back star, multiplicity sums
over edge preimages, and semistability of fully contracted vertices.

Enumeration is supported for targets all of whose vertices are
indecomposable; contracted edges cannot be inserted at such vertices, so a
complete list of a fixed genus is obtained from multiplicity partitions of
the target edges and leaves together with genus markings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import EnumerationUnsupportedError, MalformedMapError
from .graph import (
    AbstractGraph,
    Edge,
    EmbeddedGraph,
    Leaf,
    Vertex,
    first_betti,
    is_indecomposable_vertex,
    total_genus,
)
from .lattice import vec_add, vec_scale


@dataclass(frozen=True)
class ParamMap:
    source: AbstractGraph
    target: EmbeddedGraph
    vertex_map: dict
    edge_map: dict   # source edge id -> target edge id, or None when contracted
    leaf_map: dict   # source leaf id -> target leaf id, or None when contracted

    def describe(self):
        partitions = {}
        for eid in sorted(self.source.edges):
            img = self.edge_map[eid]
            if img is not None:
                partitions.setdefault(img, []).append(self.source.edges[eid].multiplicity)
        return {
            "vertices": len(self.source.vertices),
            "edges": len(self.source.edges),
            "genus_marks": {v: g for v in sorted(self.source.vertices)
                            if (g := self.source.vertices[v].genus)},
            "edge_partitions": {k: sorted(v, reverse=True) for k, v in partitions.items()},
        }


@dataclass(frozen=True)
class ParamViolation:
    condition: str
    witness: str
    detail: str


@dataclass(frozen=True)
class ParamReport:
    ok: bool
    violations: tuple = ()


def identity_parameterization(target: EmbeddedGraph) -> ParamMap:
    source = AbstractGraph(
        [Vertex(v.id, v.genus) for v in target.vertices.values()],
        [Edge(e.id, e.ends, e.multiplicity, e.length) for e in target.edges.values()],
        [Leaf(l.id, l.vertex, l.multiplicity) for l in target.leaves.values()],
    )
    return ParamMap(
        source=source,
        target=target,
        vertex_map={v: v for v in target.vertices},
        edge_map={e: e for e in target.edges},
        leaf_map={l: l for l in target.leaves},
    )


def _check_incidence(p: ParamMap):
    for sid, tid in p.vertex_map.items():
        if sid not in p.source.vertices or tid not in p.target.vertices:
            raise MalformedMapError(f"vertex map entry {sid!r} -> {tid!r} is dangling")
    for v in p.source.vertices:
        if v not in p.vertex_map:
            raise MalformedMapError(f"vertex {v!r} has no image")
    for eid, e in p.source.edges.items():
        img = p.edge_map.get(eid, "missing")
        if img == "missing":
            raise MalformedMapError(f"edge {eid!r} has no image entry")
        a, b = (p.vertex_map[e.ends[0]], p.vertex_map[e.ends[1]])
        if img is None:
            if a != b:
                raise MalformedMapError(
                    f"contracted edge {eid!r} has endpoints mapping to {a!r} != {b!r}")
            continue
        te = p.target.edges.get(img)
        if te is None:
            raise MalformedMapError(f"edge {eid!r} maps to unknown edge {img!r}")
        if {a, b} != set(te.ends) or a == b:
            raise MalformedMapError(
                f"edge {eid!r} endpoints map to {a!r}, {b!r}, not onto the ends of {img!r}")
    for lid, l in p.source.leaves.items():
        img = p.leaf_map.get(lid, "missing")
        if img == "missing":
            raise MalformedMapError(f"leaf {lid!r} has no image entry")
        if img is None:
            continue
        tl = p.target.leaves.get(img)
        if tl is None:
            raise MalformedMapError(f"leaf {lid!r} maps to unknown leaf {img!r}")
        if p.vertex_map[l.vertex] != tl.vertex:
            raise MalformedMapError(f"leaf {lid!r} is anchored away from its image")


def _away_direction(p: ParamMap, eid, source_vertex):
    e = p.source.edges[eid]
    img = p.edge_map[eid]
    te = p.target.edges[img]
    tv = p.vertex_map[source_vertex]
    return p.target.primitive_away(te.id, tv)


def verify_parameterization(p: ParamMap) -> ParamReport:
    """Check the four defining conditions; incidence violations raise."""
    _check_incidence(p)
    violations = []

    for eid, e in sorted(p.source.edges.items()):
        img = p.edge_map[eid]
        if img is None:
            if e.multiplicity != 0:
                violations.append(ParamViolation(
                    "dilation", eid,
                    f"contracted edge has multiplicity {e.multiplicity} != 0"))
            continue
        if e.multiplicity == 0:
            violations.append(ParamViolation(
                "dilation", eid, "multiplicity 0 on a non-contracted edge"))
            continue
        lat = p.target.lattice_length(img)
        if e.multiplicity * e.length != lat:
            violations.append(ParamViolation(
                "dilation", eid,
                f"multiplicity*length = {e.multiplicity * e.length} but the image "
                f"has lattice length {lat}"))

    dim = p.target.ambient_dim
    for v in p.source.vertex_ids():
        total = tuple(Fraction(0) for _ in range(dim))
        for eid in p.source.incident_edges(v):
            e = p.source.edges[eid]
            if p.edge_map[eid] is None or e.multiplicity == 0:
                continue
            if e.ends[0] == e.ends[1]:
                continue
            total = vec_add(total, vec_scale(e.multiplicity, _away_direction(p, eid, v)))
        for lid in p.source.incident_leaves(v):
            l = p.source.leaves[lid]
            img = p.leaf_map[lid]
            if img is None or l.multiplicity == 0:
                continue
            total = vec_add(total, vec_scale(l.multiplicity,
                                             p.target.leaf_directions[img]))
        if any(x != 0 for x in total):
            violations.append(ParamViolation(
                "balancing", v, f"weighted direction sum {tuple(map(str, total))}"))

    for tid, te in sorted(p.target.edges.items()):
        got = sum(p.source.edges[eid].multiplicity
                  for eid, img in p.edge_map.items() if img == tid)
        if got != te.multiplicity:
            violations.append(ParamViolation(
                "multiplicity-sum", tid,
                f"preimage multiplicities sum to {got}, expected {te.multiplicity}"))
    for tid, tl in sorted(p.target.leaves.items()):
        got = sum(p.source.leaves[lid].multiplicity
                  for lid, img in p.leaf_map.items() if img == tid)
        if got != tl.multiplicity:
            violations.append(ParamViolation(
                "multiplicity-sum", tid,
                f"preimage multiplicities sum to {got}, expected {tl.multiplicity}"))

    for v in p.source.vertex_ids():
        effective = 0
        for eid in p.source.incident_edges(v):
            if p.edge_map[eid] is not None and p.source.edges[eid].multiplicity > 0:
                effective += 1
        for lid in p.source.incident_leaves(v):
            if p.leaf_map[lid] is not None and p.source.leaves[lid].multiplicity > 0:
                effective += 1
        if effective == 0 and p.source.degree(v) < 2:
            violations.append(ParamViolation(
                "semistability", v,
                f"fully contracted vertex of degree {p.source.degree(v)}"))

    return ParamReport(ok=not violations, violations=tuple(violations))


def pullback_embedding(p: ParamMap) -> EmbeddedGraph:
    """The source graph embedded through the map; needs a verified map."""
    positions = {v: p.target.positions[p.vertex_map[v]] for v in p.source.vertices}
    leaf_directions = {}
    for lid in p.source.leaves:
        img = p.leaf_map[lid]
        if img is None:
            d = [0] * p.target.ambient_dim
            d[0] = 1
            leaf_directions[lid] = tuple(d)  # placeholder; contracted leaves carry mu 0
        else:
            leaf_directions[lid] = p.target.leaf_directions[img]
    return EmbeddedGraph(
        p.target.ambient_dim,
        [Vertex(v.id, v.genus) for v in p.source.vertices.values()],
        [Edge(e.id, e.ends, e.multiplicity, e.length) for e in p.source.edges.values()],
        [Leaf(l.id, l.vertex, l.multiplicity) for l in p.source.leaves.values()],
        positions,
        leaf_directions,
    )


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _partitions(n):
    """Partitions of n into non-increasing positive parts."""
    if n == 0:
        return ((),)
    out = []

    def rec(remaining, maxpart, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, maxpart), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def _compositions(total, slots):
    """All ways to place ``total`` units into ``slots`` ordered boxes."""
    if slots == 0:
        return [()] if total == 0 else []
    out = []

    def rec(i, remaining, acc):
        if i == slots - 1:
            out.append(tuple(acc) + (remaining,))
            return
        for k in range(remaining + 1):
            acc.append(k)
            rec(i + 1, remaining - k, acc)
            acc.pop()

    rec(0, total, [])
    return out


def _target_automorphisms(target: EmbeddedGraph):
    """All abstract automorphisms preserving genus, multiplicities and lengths."""
    verts = target.vertex_ids()

    def vertex_key(v):
        edge_types = sorted(
            (target.edges[e].multiplicity, target.edges[e].length)
            for e in target.incident_edges(v))
        leaf_types = sorted(target.leaves[l].multiplicity
                            for l in target.incident_leaves(v))
        return (target.vertices[v].genus, tuple(edge_types), tuple(leaf_types))

    keys = {v: vertex_key(v) for v in verts}

    def edge_profile(u, w):
        out = []
        for e in target.incident_edges(u):
            ends = set(target.edges[e].ends)
            if ends == {u, w} or (u == w and len(ends) == 1):
                out.append((target.edges[e].multiplicity, target.edges[e].length))
        return sorted(out)

    autos = []

    def extend(mapping, remaining):
        if not remaining:
            autos.append(dict(mapping))
            return
        v = remaining[0]
        for w in verts:
            if w in mapping.values() or keys[v] != keys[w]:
                continue
            ok = True
            for u, iu in mapping.items():
                if edge_profile(v, u) != edge_profile(w, iu):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                extend(mapping, remaining[1:])
                del mapping[v]

    extend({}, verts)
    return autos


@dataclass(frozen=True)
class EnumerationResult:
    maps: tuple
    raw_count: int
    distinct_up_to_symmetry: int

    def __iter__(self):
        return iter(self.maps)

    def __len__(self):
        return len(self.maps)


def enumerate_parameterizations(target: EmbeddedGraph, genus: int) -> EnumerationResult:
    """All parameterizations of a fixed genus, for indecomposable targets.

    The list is complete up to relabeling of parallel source edges; the
    symmetry-reduced count additionally quotients by abstract automorphisms
    of the target.
    """
    for v in target.vertex_ids():
        if not is_indecomposable_vertex(target, v):
            raise EnumerationUnsupportedError(
                f"vertex {v!r} is decomposable; the enumeration would not be finite")

    edge_ids = target.edge_ids()
    leaf_ids = target.leaf_ids()
    edge_choices = [_partitions(target.edges[e].multiplicity) for e in edge_ids]
    leaf_choices = [_partitions(target.leaves[l].multiplicity) for l in leaf_ids]

    maps = []
    signatures = []
    vids = target.vertex_ids()
    for combo in product(*edge_choices, *leaf_choices):
        edge_parts = dict(zip(edge_ids, combo[:len(edge_ids)]))
        leaf_parts = dict(zip(leaf_ids, combo[len(edge_ids):]))
        src_edges = []
        edge_map = {}
        for tid in edge_ids:
            te = target.edges[tid]
            parts = edge_parts[tid]
            for i, mu in enumerate(parts):
                sid = tid if len(parts) == 1 else f"{tid}#p{i}"
                src_edges.append(Edge(sid, te.ends, mu,
                                      Fraction(te.multiplicity * te.length, mu)))
                edge_map[sid] = tid
        src_leaves = []
        leaf_map = {}
        for tid in leaf_ids:
            tl = target.leaves[tid]
            parts = leaf_parts[tid]
            for i, mu in enumerate(parts):
                sid = tid if len(parts) == 1 else f"{tid}#p{i}"
                src_leaves.append(Leaf(sid, tl.vertex, mu))
                leaf_map[sid] = tid
        skeleton = AbstractGraph([Vertex(v) for v in vids], src_edges, src_leaves)
        h1 = first_betti(skeleton)
        budget = genus - h1
        if budget < 0:
            continue
        for marks in _compositions(budget, len(vids)):
            source = AbstractGraph(
                [Vertex(v, m) for v, m in zip(vids, marks)], src_edges, src_leaves)
            maps.append(ParamMap(
                source=source, target=target,
                vertex_map={v: v for v in vids},
                edge_map=dict(edge_map), leaf_map=dict(leaf_map)))
            signatures.append((
                tuple(sorted((tid, edge_parts[tid]) for tid in edge_ids)),
                tuple(sorted((tid, leaf_parts[tid]) for tid in leaf_ids)),
                tuple(sorted(zip(vids, marks))),
            ))

    autos = _target_automorphisms(target)
    canon = set()
    for sig in signatures:
        edge_sig, leaf_sig, mark_sig = sig
        best = None
        for sigma in autos:
            edge_types = {}
            for tid, parts in edge_sig:
                te = target.edges[tid]
                key = (tuple(sorted(sigma[x] for x in set(te.ends))),
                       te.multiplicity, te.length)
                edge_types.setdefault(key, []).append(parts)
            leaf_types = {}
            for tid, parts in leaf_sig:
                tl = target.leaves[tid]
                key = (sigma[tl.vertex], tl.multiplicity)
                leaf_types.setdefault(key, []).append(parts)
            image = (tuple(sorted((k, tuple(sorted(v))) for k, v in edge_types.items())),
                     tuple(sorted((k, tuple(sorted(v))) for k, v in leaf_types.items())),
                     tuple(sorted((sigma[v], m) for v, m in mark_sig)))
            if best is None or image < best:
                best = image
        canon.add(best)

    return EnumerationResult(tuple(maps), len(maps), len(canon))
