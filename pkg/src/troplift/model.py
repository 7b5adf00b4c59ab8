"""Constraint model for level-set functions on a balanced embedded graph.

Fix a primitive integer direction.  A candidate function is non-negative,
vanishes on every edge and leaf not orthogonal to the direction, and on each
orthogonal edge is described by its endpoint values together with one
outward slope per edge end; a concave two-piece profile interpolates them.
This is exactly the closure of the discrete candidates on all iterated edge
subdivisions: a subdivision point carries zero curvature allowance, forcing
slopes non-increasing along an edge, and slopes and values per unit length
are unchanged when positions and values are rescaled together.

Because subdivision rescales values and positions together, the slopes of a
discrete candidate are the same integers at every level; only the vertex
values acquire denominators.  The closure therefore keeps integer outward
slopes, and a nonzero integer has magnitude at least 1.  The typed
constraints are then linear apart from two kinds of disjunction:

* every slope on an orthogonal edge or leaf satisfies s >= 1 or s <= -1
  (sign choice);
* on every cycle of a level component contained in the interior of that
  component, the boundary divisor at the minimum-level vertex set must have
  total degree at least 2 and per-vertex degree at least 1, which depends on
  which vertices achieve the minimum (argmin choice).

The search in :mod:`troplift.search` branches over those choices and decides
each branch by exact linear feasibility.  The rows built here are shared
verbatim by the certificate validator.

Row identifiers (all rows are in >=-form):

====================  =====================================================
``edge:<e>:<i>``      s_i * length + x_this - x_other >= 0     (concavity)
``K:<v>``             -(sum of outward slopes at v) >= -(deg(v)+2g(v)-2)
``zero:<v>``          -x_v >= 0          (vertex touched by a crossing edge)
``leafpos:<l>``       t_l >= 1
``sign:<s>:+``        s >= 1
``sign:<s>:-``        -s >= 1
``tiele/tiege:...``   equality of the argmin set values
``strictmin:<c>:<u>`` x_u - x_base - tau >= 0                       [strict]
``cycdeg:<c>``        entering multiplicities sum to >= 2
``cycvert:<c>:<v>``   entering multiplicities at v sum to >= 1
``taucap``            -tau >= -1
====================  =====================================================

Feasibility of a branch means the optimum of ``maximize tau`` is positive;
the auxiliary variable makes the strict minimum-set separations exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .graph import AbstractGraph, EmbeddedGraph, Vertex, Edge, Subgraph, simple_cycles, whole_graph
from .lattice import is_zero_vec, make_primitive, vec_dot
from .linprog import GeRow

TAU = "tau"


@dataclass(frozen=True)
class Direction:
    """A primitive nonzero integer vector."""

    m: tuple

    def __init__(self, m):
        vec = tuple(int(x) for x in m)
        if is_zero_vec(vec):
            raise PreconditionError("direction must be nonzero")
        object.__setattr__(self, "m", make_primitive(vec))

    def __iter__(self):
        return iter(self.m)

    def __str__(self):
        return ",".join(str(x) for x in self.m)


@dataclass(frozen=True)
class ModelEdge:
    """An orthogonal edge of the model; possibly a merged smooth chain."""

    id: str
    ends: tuple            # (vertex at end 0, vertex at end 1)
    length: Fraction
    parents: tuple         # constituent edge ids of the underlying graph
    parent_from: tuple     # for each parent, its end-0 vertex along the chain
    cumulative: tuple      # distance from end 0 to the start of each parent


@dataclass(frozen=True)
class CycleInfo:
    key: str
    edges: tuple           # model edge ids
    vertices: tuple        # all model vertices on the cycle, sorted
    candidates: tuple      # vertices eligible to achieve the minimum
    boundary: dict         # vertex -> tuple of slope variable names


def svar(edge_id, end) -> str:
    return f"s:{edge_id}:{end}"


def tvar(leaf_id) -> str:
    return f"t:{leaf_id}"


def xvar(vertex_id) -> str:
    return f"x:{vertex_id}"


class StableModel:
    """Rows and combinatorial data of the relaxation for one direction."""

    def __init__(self, graph: EmbeddedGraph, direction: Direction, merge=True,
                 smooth_candidates=False, cycle_cap=64):
        self.graph = graph
        self.direction = Direction(direction.m if isinstance(direction, Direction)
                                   else direction)
        m = self.direction.m
        self.merge = bool(merge)

        self.orth_edges = []
        self.cross_edges = []
        for eid in graph.edge_ids():
            if vec_dot(m, graph.displacement(eid)) == 0:
                self.orth_edges.append(eid)
            else:
                self.cross_edges.append(eid)
        self.orth_leaves = []
        self.cross_leaves = []
        for lid in graph.leaf_ids():
            if vec_dot(m, graph.leaf_directions[lid]) == 0:
                self.orth_leaves.append(lid)
            else:
                self.cross_leaves.append(lid)

        self.all_orthogonal = not self.cross_edges and not self.cross_leaves

        self.zero_forced = set()
        for eid in self.cross_edges:
            self.zero_forced.update(graph.edges[eid].ends)
        for lid in self.cross_leaves:
            self.zero_forced.add(graph.leaves[lid].vertex)

        self.K = {v: graph.degree(v) + 2 * graph.genus_mark(v) - 2
                  for v in graph.vertex_ids()}

        self._smooth = {v for v in graph.vertex_ids() if self._is_smooth(v)}
        self._build_model_edges()
        self._build_cycles(smooth_candidates=smooth_candidates, cycle_cap=cycle_cap)

        self.slope_vars = []
        self.var_edge_end = {}
        for me in self.model_edges.values():
            for end in (0, 1):
                name = svar(me.id, end)
                self.slope_vars.append(name)
                self.var_edge_end[name] = (me.id, end)
        self.slope_vars.sort()
        self.leaf_vars = [tvar(l) for l in self.orth_leaves]
        self.nonneg_vars = ({xvar(v) for v in self.kept_vertices}
                            | set(self.leaf_vars))

        self.forced_signs = {}
        if self.merge:
            for name in self.slope_vars:
                meid, end = self.var_edge_end[name]
                v = self.model_edges[meid].ends[end]
                if v in self.zero_forced:
                    self.forced_signs[name] = "+"

    # -- construction -----------------------------------------------------

    def _is_smooth(self, v) -> bool:
        g = self.graph
        if v in self.zero_forced or g.genus_mark(v) != 0 or g.incident_leaves(v):
            return False
        incident = [e for e in g.incident_edges(v)]
        if len(incident) != 2:
            return False
        for eid in incident:
            a, b = g.edges[eid].ends
            if a == b:
                return False
        return set(incident) <= set(self.orth_edges)

    def _build_model_edges(self):
        g = self.graph
        self.model_edges = {}
        merged_away = set()
        if not self.merge:
            chains = [(g.edges[eid].ends[0], [eid]) for eid in self.orth_edges]
        else:
            chains = []
            seen = set()
            smooth = self._smooth
            adj = {}
            for eid in self.orth_edges:
                a, b = g.edges[eid].ends
                adj.setdefault(a, []).append(eid)
                adj.setdefault(b, []).append(eid)
            for eid in sorted(self.orth_edges):
                if eid in seen:
                    continue
                a, b = g.edges[eid].ends
                if a in smooth and b in smooth and a != b:
                    continue  # interior of a chain; consumed by the walk below
                if (a in smooth) != (b in smooth):
                    start = b if a in smooth else a
                    chain = [eid]
                    seen.add(eid)
                    cur = g.other_end(eid, start)
                    while cur in smooth:
                        nxt = [x for x in adj[cur] if x != chain[-1]][0]
                        chain.append(nxt)
                        seen.add(nxt)
                        cur = g.other_end(nxt, cur)
                    chains.append((start, chain))
                else:
                    seen.add(eid)
                    chains.append((a, [eid]))
            # edges of entirely smooth cycles were never reached: keep unmerged
            for eid in sorted(self.orth_edges):
                if eid not in seen:
                    chains.append((g.edges[eid].ends[0], [eid]))
                    seen.add(eid)

        def walk(start, order):
            froms = []
            cur = start
            for eid in order:
                froms.append(cur)
                cur = g.other_end(eid, cur)
            return froms, cur

        for start, chain in chains:
            if len(chain) == 1:
                eid = chain[0]
                e = g.edges[eid]
                me = ModelEdge(eid, e.ends, e.length, (eid,), (e.ends[0],),
                               (Fraction(0),))
            else:
                order = list(chain)
                froms, end = walk(start, order)
                if "+".join(reversed(order)) < "+".join(order):
                    order.reverse()
                    start, end = end, start
                    froms, end = walk(start, order)
                cumulative = []
                total = Fraction(0)
                for eid in order:
                    cumulative.append(total)
                    total += g.edges[eid].length
                me = ModelEdge(f"mrg:{'+'.join(order)}", (start, end), total,
                               tuple(order), tuple(froms), tuple(cumulative))
                for v in froms[1:]:
                    merged_away.add(v)
            self.model_edges[me.id] = me
        self.merged_away = merged_away
        self.kept_vertices = sorted(v for v in self.graph.vertex_ids()
                                    if v not in merged_away)

    def _build_cycles(self, smooth_candidates, cycle_cap):
        verts = set(self.kept_vertices)
        tmp_vertices = [Vertex(v) for v in sorted(verts)]
        tmp_edges = [Edge(me.id, me.ends, 1, me.length)
                     for me in self.model_edges.values()]
        tmp = AbstractGraph(tmp_vertices, tmp_edges)
        cycles = simple_cycles(whole_graph(tmp), cap=cycle_cap)
        self.cycles = []
        incident_ends = {}
        for me in self.model_edges.values():
            for end in (0, 1):
                incident_ends.setdefault(me.ends[end], []).append((me.id, end))
        for cyc in cycles:
            cyc_set = set(cyc)
            vertices = sorted({v for eid in cyc for v in self.model_edges[eid].ends})
            if any(v in self.zero_forced for v in vertices):
                continue  # the cycle touches the boundary of its level component
            if smooth_candidates:
                candidates = tuple(vertices)
            else:
                candidates = tuple(v for v in vertices if v not in self._smooth)
            if not candidates:
                # an entirely smooth floating cycle; it is already inconsistent
                # with nonzero slopes and the slope-sum rows, so it needs no
                # divisor constraints and cannot host an argmin split
                continue
            boundary = {}
            for v in candidates:
                items = tuple(sorted(svar(meid, end)
                                     for meid, end in incident_ends.get(v, [])
                                     if meid not in cyc_set))
                boundary[v] = items
            key = "cyc(" + ",".join(cyc) + ")"
            self.cycles.append(CycleInfo(key, cyc, tuple(vertices), candidates, boundary))
        self.cycles.sort(key=lambda c: c.key)
        self.cycle_by_key = {c.key: c for c in self.cycles}

    # -- rows ---------------------------------------------------------------

    def base_rows(self):
        rows = []
        g = self.graph
        for me in sorted(self.model_edges.values(), key=lambda e: e.id):
            a, b = me.ends
            rows.append(GeRow(f"edge:{me.id}:0",
                              _combine({svar(me.id, 0): me.length},
                                       {xvar(a): 1, xvar(b): -1}),
                              Fraction(0)))
            rows.append(GeRow(f"edge:{me.id}:1",
                              _combine({svar(me.id, 1): me.length},
                                       {xvar(b): 1, xvar(a): -1}),
                              Fraction(0)))
        ends_at = {}
        for me in self.model_edges.values():
            for end in (0, 1):
                ends_at.setdefault(me.ends[end], []).append(svar(me.id, end))
        for v in self.kept_vertices:
            coeffs = {name: Fraction(-1) for name in ends_at.get(v, [])}
            for lid in g.incident_leaves(v):
                if lid in self.orth_leaves:
                    coeffs[tvar(lid)] = Fraction(-1)
            rows.append(GeRow(f"K:{v}", coeffs, Fraction(-self.K[v])))
        for v in sorted(self.zero_forced):
            if v in self.merged_away:
                continue
            rows.append(GeRow(f"zero:{v}", {xvar(v): Fraction(-1)}, Fraction(0)))
        for lid in self.orth_leaves:
            rows.append(GeRow(f"leafpos:{lid}", {tvar(lid): Fraction(1)}, Fraction(1)))
        rows.append(GeRow("taucap", {TAU: Fraction(-1)}, Fraction(-1)))
        return rows

    def sign_row(self, var, sign):
        if var not in self.var_edge_end:
            raise PreconditionError(f"unknown slope variable {var!r}")
        if sign == "+":
            return GeRow(f"sign:{var}:+", {var: Fraction(1)}, Fraction(1))
        if sign == "-":
            return GeRow(f"sign:{var}:-", {var: Fraction(-1)}, Fraction(1))
        raise PreconditionError(f"bad sign {sign!r}")

    def argmin_rows(self, cycle_key, subset, signs):
        """Tie, strictness and divisor rows for one argmin choice.

        Tie and strictness rows are always produced.  The entering-degree
        row of a vertex becomes available once all its boundary slopes are
        sign-decided (entries come only from negative-signed slopes), and
        the total-degree row once that holds for the whole argmin set.
        """
        cyc = self.cycle_by_key[cycle_key]
        subset = tuple(sorted(subset))
        if not subset or not set(subset) <= set(cyc.candidates):
            raise PreconditionError("argmin subset must be a nonempty candidate set")
        rows = []
        base = subset[0]
        for v in subset[1:]:
            rows.append(GeRow(f"tiele:{cycle_key}:{v}",
                              {xvar(base): Fraction(1), xvar(v): Fraction(-1)},
                              Fraction(0)))
            rows.append(GeRow(f"tiege:{cycle_key}:{v}",
                              {xvar(v): Fraction(1), xvar(base): Fraction(-1)},
                              Fraction(0)))
        for u in cyc.candidates:
            if u in subset:
                continue
            rows.append(GeRow(f"strictmin:{cycle_key}:{u}",
                              {xvar(u): Fraction(1), xvar(base): Fraction(-1),
                               TAU: Fraction(-1)}, Fraction(0)))
        total = {}
        armed_all = True
        for v in subset:
            armed = all(var in signs for var in cyc.boundary[v])
            if not armed:
                armed_all = False
                continue
            per_vertex = {}
            for var in cyc.boundary[v]:
                if signs[var] == "-":
                    per_vertex[var] = Fraction(-1)
                    total[var] = Fraction(-1)
            rows.append(GeRow(f"cycvert:{cycle_key}:{v}", per_vertex, Fraction(1)))
        if armed_all:
            rows.append(GeRow(f"cycdeg:{cycle_key}", total, Fraction(2)))
        return rows

    def strict_row_ids(self, rows):
        return [r.id for r in rows
                if r.id.startswith(("sign:", "strictmin:", "leafpos:"))]


def _combine(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + Fraction(v)
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# Relaxed witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelaxedPLFunction:
    """Vertex values plus one outward slope per orthogonal edge end.

    Edge slopes are keyed by (edge id, end index) and must have magnitude at
    least 1 on orthogonal edges (slopes survive subdivision unchanged, so
    the closure keeps them away from zero).  Non-orthogonal edges and leaves
    implicitly carry the zero function.
    """

    vertex_values: dict
    edge_slopes: dict
    leaf_slopes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RelaxedReport:
    ok: bool
    failures: tuple = ()


def verify_relaxed(graph: EmbeddedGraph, direction, witness: RelaxedPLFunction,
                   cycle_cap=256) -> RelaxedReport:
    """Independent arithmetic check of a relaxed witness, without any search.

    Verifies non-negativity, vanishing at crossing vertices, edge concavity,
    nonzero slopes, vertex slope-sum bounds, and the entering-degree
    conditions on every constrained cycle at its actual minimum set.
    """
    model = StableModel(graph, Direction(direction), merge=False,
                        smooth_candidates=True, cycle_cap=cycle_cap)
    fails = []
    vals = witness.vertex_values
    for v in graph.vertex_ids():
        if v not in vals:
            fails.append(f"missing value at {v}")
            return RelaxedReport(False, tuple(fails))
        if vals[v] < 0:
            fails.append(f"negative value at {v}")
        if v in model.zero_forced and vals[v] != 0:
            fails.append(f"value at crossing vertex {v} is nonzero")
    for me in model.model_edges.values():
        a, b = me.ends
        s0 = witness.edge_slopes.get((me.id, 0))
        s1 = witness.edge_slopes.get((me.id, 1))
        if s0 is None or s1 is None:
            fails.append(f"missing slope on edge {me.id}")
            continue
        if abs(s0) < 1 or abs(s1) < 1:
            fails.append(f"slope of magnitude below 1 on edge {me.id}")
        if s0 * me.length < vals[b] - vals[a] or s1 * me.length < vals[a] - vals[b]:
            fails.append(f"no concave profile on edge {me.id}")
    for lid in model.orth_leaves:
        t = witness.leaf_slopes.get(lid)
        if t is None or t < 1:
            fails.append(f"leaf {lid} slope must be at least 1")
    for lid in model.cross_leaves:
        if witness.leaf_slopes.get(lid, 0) != 0:
            fails.append(f"leaf {lid} must carry slope 0")
    for v in model.kept_vertices:
        total = Fraction(0)
        for me in model.model_edges.values():
            for end in (0, 1):
                if me.ends[end] == v:
                    s = witness.edge_slopes.get((me.id, end))
                    total += s if s is not None else 0
        for lid in graph.incident_leaves(v):
            if lid in model.orth_leaves:
                total += witness.leaf_slopes.get(lid, 0)
        if total > model.K[v]:
            fails.append(f"slope sum {total} exceeds budget {model.K[v]} at {v}")
    for cyc in model.cycles:
        h = min(vals[v] for v in cyc.vertices)
        argmin = [v for v in cyc.vertices if vals[v] == h]
        degree = Fraction(0)
        for v in argmin:
            per = Fraction(0)
            for var in cyc.boundary.get(v, ()):
                meid, end = model.var_edge_end[var]
                s = witness.edge_slopes.get((meid, end), Fraction(0))
                if s < 0:
                    per += -s
            degree += per
            if per < 1:
                fails.append(f"cycle {cyc.key}: vertex {v} enters with degree {per} < 1")
        if degree < 2:
            fails.append(f"cycle {cyc.key}: total entering degree {degree} < 2")
    return RelaxedReport(not fails, tuple(fails))


def relax_discrete(graph: EmbeddedGraph, level: int, phi) -> RelaxedPLFunction:
    """The relaxed function induced by a discrete solution on a subdivision.

    Vertex values divide by the level; endpoint slopes are read off the
    first and last segments, whose slopes subdivision leaves unchanged.
    """
    from .divisor import slope_away
    from .graph import subdivide

    gl = subdivide(graph, level)
    values = {v: phi.values[v] / level for v in graph.vertex_ids()}
    edge_slopes = {}
    for eid in graph.edge_ids():
        a, b = graph.edges[eid].ends
        first = eid if level == 1 else f"{eid}#0"
        last = eid if level == 1 else f"{eid}#{level - 1}"
        edge_slopes[(eid, 0)] = Fraction(slope_away(gl, phi, a, first))
        edge_slopes[(eid, 1)] = Fraction(slope_away(gl, phi, b, last))
    leaf_slopes = {lid: Fraction(phi.leaf_slopes.get(lid, 0))
                   for lid in graph.leaf_ids()}
    return RelaxedPLFunction(values, edge_slopes, leaf_slopes)
