"""Search for level-set functions and the decision procedures built on it.

``phi_search_stable`` decides the subdivision-stable relaxation of
:mod:`troplift.model` by branching over slope signs and cycle argmin sets
and settling each branch with exact linear programming.  An infeasible
branch yields multipliers that any third party can recheck; the full branch
tree with its leaf witnesses forms an obstruction certificate valid for
every subdivision level at once.

``phi_search_discrete`` enumerates honest integer-sloped functions on a
fixed subdivision; its refutations are only valid at that level.

The well-spacedness checks compare boundary distances of level components,
and ``check_theorem1`` replays a discrete candidate against all conditions,
including section-existence tests on the level subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ampleness import ample
from .divisor import PLFunction, canonical_divisor, laplacian, slope_away
from .errors import PreconditionError
from .graph import (
    EmbeddedGraph,
    Subgraph,
    blocks,
    first_betti,
    level_preimage,
    level_value,
    metric_distance,
    simple_cycles,
    structure_checks,
    subdivide,
    vertex_point,
)
from .lattice import integer_kernel, sign_normalize, vec_dot
from .linprog import GeRow, Solver
from .model import (
    TAU,
    Direction,
    RelaxedPLFunction,
    StableModel,
    relax_discrete,
    svar,
    tvar,
    verify_relaxed,
    xvar,
)
from .parameterization import ParamMap, identity_parameterization, pullback_embedding


@dataclass
class SearchOptions:
    pruning: bool = True          # smooth-chain merging and forced-sign propagation
    node_cap: int = 100_000       # explored branch nodes before giving up
    cycle_cap: int = 64           # enumerated cycles per level component
    gamma_budget: int | None = None  # extra subgraph size for condition-(4) replay
    slope_bound: int | None = None   # override for the discrete slope bound
    discrete_cap: int = 2_000_000    # assignment nodes for the discrete search


@dataclass
class SearchResult:
    status: str                   # "sat" | "unsat" | "indeterminate"
    witness: object = None        # RelaxedPLFunction | PLFunction | None
    certificate: object = None    # ObstructionCertificate | None
    reason: str = ""
    stats: dict = field(default_factory=dict)


class _CapExceeded(Exception):
    pass


# ---------------------------------------------------------------------------
# Candidate directions
# ---------------------------------------------------------------------------

def candidate_directions(g: EmbeddedGraph):
    """Primitive normals of the affine spans of a cycle basis of the graph.

    Cycles spanning the whole ambient space contribute nothing; a cycle in a
    proper affine subspace contributes a basis of the saturated orthogonal
    lattice.  Results are deduplicated up to sign.
    """
    adj = {}
    for eid in g.edge_ids():
        a, b = g.edges[eid].ends
        adj.setdefault(a, []).append((eid, b))
        adj.setdefault(b, []).append((eid, a))
    visited = set()
    tree_edges = set()
    parent = {}
    for root in g.vertex_ids():
        if root in visited:
            continue
        visited.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            for eid, w in sorted(adj.get(v, [])):
                if w not in visited:
                    visited.add(w)
                    parent[w] = (eid, v)
                    tree_edges.add(eid)
                    queue.append(w)

    def path_to_root(v):
        out = []
        while v in parent:
            eid, up = parent[v]
            out.append(eid)
            v = up
        return out

    directions = set()
    for eid in g.edge_ids():
        if eid in tree_edges:
            continue
        a, b = g.edges[eid].ends
        pa, pb = path_to_root(a), path_to_root(b)
        while pa and pb and pa[-1] == pb[-1]:
            pa.pop()
            pb.pop()
        cycle = set(pa) | set(pb) | {eid}
        rows = []
        for ce in sorted(cycle):
            disp = g.displacement(ce)
            denom = 1
            for x in disp:
                denom = denom * Fraction(x).denominator
            rows.append(tuple(int(Fraction(x) * denom) for x in disp))
        basis = integer_kernel(rows)
        for vec in basis:
            directions.add(sign_normalize(vec))
    return [Direction(d) for d in sorted(directions)]


# ---------------------------------------------------------------------------
# Stable search
# ---------------------------------------------------------------------------

def _row_values(rows, y, tau):
    vals = {}
    for r in rows:
        total = Fraction(0)
        for var, c in r.coeffs.items():
            total += c * (tau if var == TAU else y.get(var, Fraction(0)))
        vals[r.id] = total - r.rhs
    return vals


def _satisfies(rows, y, tau):
    return all(v >= 0 for v in _row_values(rows, y, tau).values())


def _repair_zero_slopes(model, y, signs):
    """Nudge undecided zero slopes to nonzero values without breaking rows.

    Works in place on a copy; processes variables in canonical order and
    recomputes slack as it goes.  Only touches variables absent from every
    sign, tie, or divisor row (undecided ones).
    """
    y = dict(y)
    k_slack = {}
    ends_at = {}
    for me in model.model_edges.values():
        for end in (0, 1):
            ends_at.setdefault(me.ends[end], []).append((me.id, end))
    for v in model.kept_vertices:
        total = Fraction(0)
        for meid, end in ends_at.get(v, []):
            total += y.get(svar(meid, end), Fraction(0))
        for lid in model.graph.incident_leaves(v):
            if lid in model.orth_leaves:
                total += y.get(tvar(lid), Fraction(0))
        k_slack[v] = Fraction(model.K[v]) - total
    for name in model.slope_vars:
        if name in signs or abs(y.get(name, Fraction(0))) >= 1:
            continue
        meid, end = model.var_edge_end[name]
        me = model.model_edges[meid]
        v = me.ends[end]
        w = me.ends[1 - end]
        current = y.get(name, Fraction(0))
        lo = (y.get(xvar(w), Fraction(0)) - y.get(xvar(v), Fraction(0))) / me.length
        hi = current + k_slack[v]
        pick = None
        if lo <= 1 <= hi:
            pick = Fraction(1)
        elif lo <= -1 <= hi and -1 >= lo:
            pick = Fraction(-1)
        if pick is not None:
            y[name] = pick
            k_slack[v] -= pick - current
    return y


def _verify_candidate(model, y):
    """First violated requirement of a candidate point, or None."""
    for name in model.slope_vars:
        if abs(y.get(name, Fraction(0))) < 1:
            return ("slope", name)
    for cyc in model.cycles:
        h = min(y.get(xvar(v), Fraction(0)) for v in cyc.vertices)
        argmin_all = [v for v in cyc.vertices if y.get(xvar(v), Fraction(0)) == h]
        if any(v not in cyc.candidates for v in argmin_all):
            return ("cycle", cyc.key)
        degree = Fraction(0)
        ok = True
        for v in argmin_all:
            per = Fraction(0)
            for var in cyc.boundary[v]:
                s = y.get(var, Fraction(0))
                if s < 0:
                    per += -s
            degree += per
            if per < 1:
                ok = False
        if not ok or degree < 2:
            return ("cycle", cyc.key)
    return None


def _sigma_substitution(model):
    """slope -> (length, x at this end, x at the other end)."""
    sub = {}
    for me in model.model_edges.values():
        for end in (0, 1):
            sub[svar(me.id, end)] = (me.length, xvar(me.ends[end]),
                                     xvar(me.ends[1 - end]))
    return sub


def _reduce_row(sub, row):
    """Rewrite a row over the concavity slacks; edge rows reduce away.

    The substitution slope = slack + chord keeps row ids and right-hand
    sides, makes every slope variable non-negative, and turns each edge row
    into the slack's own sign bound.
    """
    if row.id.startswith("edge:"):
        return None
    coeffs = {}
    for var, c in row.coeffs.items():
        coeffs[var] = coeffs.get(var, Fraction(0)) + c
        if var in sub:
            length, xa, xb = sub[var]
            if xa != xb:
                coeffs[xb] = coeffs.get(xb, Fraction(0)) + c / length
                coeffs[xa] = coeffs.get(xa, Fraction(0)) - c / length
    return GeRow(row.id, {k: v for k, v in coeffs.items() if v != 0}, row.rhs)


def _translate_multipliers(model, sub, reduced_by_id, multipliers):
    """Lift multipliers over reduced rows to the original row system.

    The leftover slack coefficient of each slope variable is absorbed by
    the corresponding edge row, weighted by one over the edge length.
    """
    slack_weight = {}
    for rid, mu in multipliers.items():
        row = reduced_by_id[rid]
        for var, c in row.coeffs.items():
            if var in sub:
                slack_weight[var] = slack_weight.get(var, Fraction(0)) + mu * c
    out = dict(multipliers)
    for var, w in slack_weight.items():
        if w < 0:
            meid, end = model.var_edge_end[var]
            out[f"edge:{meid}:{end}"] = -w / sub[var][0]
    return {k: v for k, v in out.items() if v != 0}


def _point_from_reduced(sub, x):
    """Recover true slope values (slack + chord) from a reduced solution."""
    out = dict(x)
    for var, (length, xa, xb) in sub.items():
        sigma = x.get(var, Fraction(0))
        chord = Fraction(0) if xa == xb else \
            (x.get(xb, Fraction(0)) - x.get(xa, Fraction(0))) / length
        out[var] = sigma + chord
    return out


def _witness_from_point(model, y):
    """Expand a model point into a relaxed function on the underlying graph."""
    g = model.graph
    values = {}
    edge_slopes = {}
    for v in model.kept_vertices:
        values[v] = y.get(xvar(v), Fraction(0))
    for me in model.model_edges.values():
        s0 = y.get(svar(me.id, 0), Fraction(0))
        s1 = y.get(svar(me.id, 1), Fraction(0))
        x0 = values[me.ends[0]]
        x1 = values[me.ends[1]]
        length = me.length
        if s0 + s1 == 0:
            kink = length  # linear profile
        else:
            kink = ((x1 - x0) + s1 * length) / (s0 + s1)

        def value_at(d):
            if d <= kink:
                return x0 + s0 * d
            return x1 + s1 * (length - d)

        def slope_right(d):
            return s0 if d < kink else -s1

        def slope_left(d):
            return s0 if d <= kink else -s1

        for j, pid in enumerate(me.parents):
            pe = g.edges[pid]
            dstart = me.cumulative[j]
            dend = dstart + pe.length
            vfrom = me.parent_from[j]
            if j > 0:
                values[vfrom] = value_at(dstart)
            if vfrom == pe.ends[0]:
                edge_slopes[(pid, 0)] = slope_right(dstart)
                edge_slopes[(pid, 1)] = -slope_left(dend)
            else:
                edge_slopes[(pid, 1)] = slope_right(dstart)
                edge_slopes[(pid, 0)] = -slope_left(dend)
    leaf_slopes = {}
    for lid in model.orth_leaves:
        leaf_slopes[lid] = y.get(tvar(lid), Fraction(0))
    for lid in model.cross_leaves:
        leaf_slopes[lid] = Fraction(0)
    for v in g.vertex_ids():
        values.setdefault(v, Fraction(0))
    return RelaxedPLFunction(values, edge_slopes, leaf_slopes)


def _subset_key(subset):
    return ",".join(sorted(subset))


def _nonempty_subsets(items):
    items = sorted(items)
    out = []
    for mask in range(1, 1 << len(items)):
        sub = tuple(items[i] for i in range(len(items)) if mask & (1 << i))
        out.append(sub)
    out.sort(key=lambda s: (len(s), s))
    return out


def _leaf_note(model, multipliers):
    used = sorted(multipliers)
    for rid in used:
        if rid.startswith("cycdeg:"):
            key = rid.split(":", 1)[1]
            return (f"entering degree on {key} is forced below 2 "
                    f"(two-pole bound for a non-trivial component)")
    for rid in used:
        if rid.startswith("cycvert:"):
            _, key, v = rid.split(":")
            return f"minimum-level vertex {v} of {key} cannot receive an entry"
    for rid in used:
        if rid.startswith("K:"):
            return f"slope-sum budget at {rid.split(':', 1)[1]} is violated"
    if any(rid.startswith("zero:") or rid == "taucap" for rid in used):
        return "sign and vanishing constraints are inconsistent"
    return "linear constraints are inconsistent"


def _stable_search(model: StableModel, options: SearchOptions):
    from .certificate import ArgminNode, CaseLeaf, SignNode, check_dead_combination

    stats = {"lp_solves": 0, "nodes": 0}
    sub = _sigma_substitution(model)
    variables = ([xvar(v) for v in model.kept_vertices] + list(model.slope_vars)
                 + list(model.leaf_vars) + [TAU])
    nonneg = model.nonneg_vars | set(model.slope_vars)

    def case_rows(signs, cycles):
        rows = model.base_rows()
        for var in sorted(signs):
            rows.append(model.sign_row(var, signs[var]))
        for key in sorted(cycles):
            rows.extend(model.argmin_rows(key, cycles[key], signs))
        return rows

    def dead(rows, reduced_by_id, multipliers):
        lifted = _translate_multipliers(model, sub, reduced_by_id, multipliers)
        err = check_dead_combination({r.id: r for r in rows}, lifted,
                                     model.nonneg_vars)
        if err:
            raise AssertionError(f"internal certificate error: {err}")
        return CaseLeaf(lifted, _leaf_note(model, lifted))

    def explore(signs, cycles, incumbent, solver, pending, known_ids):
        stats["nodes"] += 1
        if stats["nodes"] > options.node_cap:
            raise _CapExceeded
        rows = case_rows(signs, cycles)
        reduced_by_id = {}
        fresh = []
        for r in rows:
            rr = _reduce_row(sub, r)
            if rr is None:
                continue
            reduced_by_id[rr.id] = rr
            if rr.id not in known_ids:
                fresh.append(rr)
        # an argmin vertex whose entering-degree row exists with empty support
        # is an immediate contradiction, no solve needed
        for r in rows:
            if r.id.startswith("cycvert:") and not r.coeffs:
                return ("unsat", dead(rows, reduced_by_id, {r.id: Fraction(1)}))
        pending = pending + fresh
        point = None
        if incumbent is not None:
            y0, tau0 = incumbent
            if tau0 > 0 and _satisfies(rows, y0, tau0):
                point = (y0, tau0)
        if point is None:
            stats["lp_solves"] += 1
            if solver is None:
                work = Solver(variables, nonneg, {TAU: Fraction(1)})
                res = work.solve_fresh(list(reduced_by_id.values()))
            else:
                work = solver.fork()
                res = work.solve_more(pending)
            if res.status == "infeasible":
                return ("unsat", dead(rows, reduced_by_id, res.farkas))
            if res.status == "optimal" and res.value <= 0:
                return ("unsat", dead(rows, reduced_by_id, res.duals))
            y = _point_from_reduced(sub, res.x)
            tau = y.pop(TAU, res.value)
            point = (y, res.value if res.value is not None else tau)
            solver, pending = work, []
        y, tau = point
        y = _repair_zero_slopes(model, y, signs)
        violation = _verify_candidate(model, y)
        if violation is None:
            return ("sat", _witness_from_point(model, y))
        kind, which = violation
        if kind == "cycle" and which in cycles:
            # the argmin set is fixed; arm its entering-degree rows by
            # deciding the remaining boundary slopes of the argmin vertices
            cyc = model.cycle_by_key[which]
            undecided = sorted(var for v in cycles[which] for var in cyc.boundary[v]
                               if var not in signs)
            if not undecided:
                raise AssertionError("armed cycle violated by a feasible point")
            kind, which = "slope", undecided[0]
        child_ids = set(known_ids) | set(reduced_by_id)
        if kind == "slope":
            children = {}
            first = "+" if y.get(which, Fraction(0)) >= 0 else "-"
            for sign in (first, "-" if first == "+" else "+"):
                child_signs = dict(signs)
                child_signs[which] = sign
                status, payload = explore(child_signs, cycles, (y, tau),
                                          solver, list(pending), child_ids)
                if status == "sat":
                    return ("sat", payload)
                children[sign] = payload
            return ("unsat", SignNode(which, children))
        cyc = model.cycle_by_key[which]
        children = {}
        for subset in _nonempty_subsets(cyc.candidates):
            child_cycles = dict(cycles)
            child_cycles[which] = subset
            status, payload = explore(signs, child_cycles, (y, tau),
                                      solver, list(pending), child_ids)
            if status == "sat":
                return ("sat", payload)
            children[_subset_key(subset)] = payload
        return ("unsat", ArgminNode(which, children))

    status, payload = explore(dict(model.forced_signs), {}, None, None, [], set())
    if status == "unsat":
        payload = _wrap_forced(model, payload)
    return status, payload, stats


def _wrap_forced(model, tree):
    """Prepend the pre-decided sign choices as explicit branch nodes.

    The suppressed branch of each forced sign dies by a fixed multiplier
    stencil: the edge concavity row, the sign row, and the vanishing row of
    the zero-forced endpoint combine to an immediate contradiction.
    """
    from .certificate import CaseLeaf, SignNode

    for var in sorted(model.forced_signs, reverse=True):
        meid, end = model.var_edge_end[var]
        me = model.model_edges[meid]
        v = me.ends[end]
        mult = {f"edge:{meid}:{end}": Fraction(1, 1) / me.length,
                f"sign:{var}:-": Fraction(1)}
        if me.ends[0] != me.ends[1]:
            mult[f"zero:{v}"] = Fraction(1, 1) / me.length
        leaf = CaseLeaf(mult, f"slope {var} leaves a vanishing vertex and cannot decrease")
        tree = SignNode(var, {"+": tree, "-": leaf})
    return tree


def phi_search_stable(g: EmbeddedGraph, p: ParamMap | None, m,
                      options: SearchOptions | None = None) -> SearchResult:
    """Decide the subdivision-stable relaxation for one direction.

    ``Unsat`` comes with a certificate covering every subdivision level;
    ``Sat`` carries a relaxed witness that revalidates independently.
    """
    from .certificate import ObstructionCertificate

    options = options or SearchOptions()
    direction = Direction(tuple(m))
    if p is None:
        p = identity_parameterization(g)
    pb = pullback_embedding(p)
    try:
        model = StableModel(pb, direction, merge=options.pruning,
                            smooth_candidates=not options.pruning,
                            cycle_cap=options.cycle_cap)
    except PreconditionError as exc:
        return SearchResult("indeterminate", reason=str(exc))
    if model.all_orthogonal:
        return SearchResult("sat", witness=PLFunction.infinite_function(),
                            reason="the direction annihilates the whole image; "
                                   "the infinite function satisfies every condition")
    try:
        status, payload, stats = _stable_search(model, options)
    except _CapExceeded:
        return SearchResult("indeterminate",
                            reason=f"branch node cap {options.node_cap} exceeded",
                            stats={"node_cap": options.node_cap})
    if status == "sat":
        report = verify_relaxed(pb, direction, payload, cycle_cap=4 * options.cycle_cap)
        if not report.ok:
            raise AssertionError(f"internal witness failed revalidation: {report.failures}")
        return SearchResult("sat", witness=payload, stats=stats)
    cert = ObstructionCertificate.build(
        direction=direction, parameterization=p, tree=payload,
        merge=model.merge, smooth_candidates=not options.pruning,
        cycle_cap=options.cycle_cap)
    return SearchResult("unsat", certificate=cert, stats=stats,
                        reason="no relaxed function satisfies the necessary conditions "
                               "at any subdivision level")


# ---------------------------------------------------------------------------
# Discrete search
# ---------------------------------------------------------------------------

def default_slope_bound(g) -> int:
    deg_k = canonical_divisor(g).degree()
    return max(1, deg_k) + 1


def _discrete_component(model, comp_vertices, comp_edges, bound, counter, cap):
    """All integer slope assignments on one orthogonal component, lazily.

    Yields (values, slopes) dicts.  Leaf slopes are fixed to 1, the least
    constraining choice.  Vanishing anchors pin their values to 0;
    components without one are shifted so their minimum value is 0.
    """
    import heapq

    g = model.graph
    anchors = sorted(v for v in comp_vertices if v in model.zero_forced)
    root = anchors[0] if anchors else min(comp_vertices)
    anchored = bool(anchors)

    adj = {}
    for eid in comp_edges:
        a, b = g.edges[eid].ends
        adj.setdefault(a, []).append((eid, b))
        adj.setdefault(b, []).append((eid, a))
    seen = {root}
    queue = [root]
    tree = []
    extra = []
    used = set()
    while queue:
        v = queue.pop(0)
        for eid, w in sorted(adj.get(v, [])):
            if eid in used:
                continue
            used.add(eid)
            if w in seen:
                extra.append(eid)
            else:
                seen.add(w)
                tree.append((eid, v, w))
                queue.append(w)

    incident = {v: [e for e, _ in adj.get(v, [])] for v in comp_vertices}
    leaf_load = {v: sum(1 for lid in g.incident_leaves(v) if lid in model.orth_leaves)
                 for v in comp_vertices}
    total_len = sum(g.edges[e].length for e in comp_edges)

    # values cannot exceed the slope bound times the distance to a vanishing
    # anchor, since the function is zero there and slopes are bounded
    cap_at = {}
    if anchored:
        dist = {v: None for v in comp_vertices}
        heap = [(Fraction(0), a) for a in anchors]
        for _, a in heap:
            dist[a] = Fraction(0)
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if dist[v] is not None and dist[v] < d:
                continue
            for eid, w in adj.get(v, []):
                nd = d + g.edges[eid].length
                if dist[w] is None or nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        for v in comp_vertices:
            cap_at[v] = bound * dist[v] if dist[v] is not None else bound * total_len
    else:
        for v in comp_vertices:
            cap_at[v] = bound * total_len

    values = {root: Fraction(0)}

    def away_budget_ok(v):
        """Slope-sum bound at v, counting unassigned edges as maximally negative."""
        total = leaf_load[v]
        unassigned = 0
        for eid in incident[v]:
            e = g.edges[eid]
            w = g.other_end(eid, v)
            if w == v:
                continue
            if w in values and (v in values):
                total += (values[w] - values[v]) / e.length
            else:
                unassigned += 1
        return total - bound * unassigned <= model.K[v]

    def assign(idx):
        counter[0] += 1
        if counter[0] > cap:
            raise _CapExceeded
        if idx == len(tree):
            slopes = {}
            for eid, v, w in tree:
                slopes[eid] = int((values[w] - values[v]) / g.edges[eid].length)
            for eid in extra:
                a, b = g.edges[eid].ends
                if a == b:
                    return  # a loop cannot carry a single nonzero linear slope
                s = (values[b] - values[a]) / g.edges[eid].length
                if s.denominator != 1 or s == 0 or abs(s) > bound:
                    return
                slopes[eid] = int(s)
            if all(away_budget_ok(v) for v in comp_vertices):
                yield dict(values), slopes
            return
        eid, v, w = tree[idx]
        length = g.edges[eid].length
        for s in [x for k in range(1, bound + 1) for x in (k, -k)]:
            val = values[v] + s * length
            if anchored and val < 0:
                continue
            if w in model.zero_forced and val != 0:
                continue
            if abs(val) > cap_at[w]:
                continue
            values[w] = val
            if away_budget_ok(v) and away_budget_ok(w):
                yield from assign(idx + 1)
            del values[w]

    for vals, slopes in assign(0):
        vals = dict(vals)
        if not anchored:
            shift = -min(vals.values())
            vals = {v: x + shift for v, x in vals.items()}
        yield vals, slopes


def _discrete_cycles_ok(model, phi):
    g = model.graph
    for cyc in model.cycles:
        h = min(phi.values[v] for v in cyc.vertices)
        argmin = [v for v in cyc.vertices if phi.values[v] == h]
        degree = 0
        ok = True
        for v in argmin:
            per = 0
            for var in cyc.boundary.get(v, ()):
                meid, end = model.var_edge_end[var]
                vv = model.model_edges[meid].ends[end]
                s = slope_away(g, phi, vv, meid)
                if s < 0:
                    per += -s
            degree += per
            if per < 1:
                ok = False
        if not ok or degree < 2:
            return False
    return True


def phi_search_discrete(g: EmbeddedGraph, p: ParamMap | None, m, level: int,
                        options: SearchOptions | None = None) -> SearchResult:
    """Complete search over integer-sloped functions at one subdivision level.

    An exhausted search is only a refutation at this level; certificates for
    every level come from the stable mode.
    """
    options = options or SearchOptions()
    direction = Direction(tuple(m))
    if p is None:
        p = identity_parameterization(g)
    pb = pullback_embedding(p)
    gl = subdivide(pb, level)
    model = StableModel(gl, direction, merge=False, smooth_candidates=True,
                        cycle_cap=options.cycle_cap)
    if model.all_orthogonal:
        return SearchResult("sat", witness=PLFunction.infinite_function(),
                            reason="the direction annihilates the whole image")
    bound = options.slope_bound or default_slope_bound(gl)

    # union-find over orthogonal edges
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in model.orth_edges:
        a, b = gl.edges[eid].ends
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = {}
    for eid in model.orth_edges:
        comps.setdefault(find(gl.edges[eid].ends[0]), []).append(eid)

    counter = [0]
    values = {}
    slopes = {}
    try:
        for root in sorted(comps):
            comp_edges = sorted(comps[root])
            comp_vertices = sorted({v for e in comp_edges for v in gl.edges[e].ends})
            found = None
            relevant = [c for c in model.cycles if set(c.edges) <= set(comp_edges)]
            probe = _ModelView(model, relevant)
            for vals, sl in _discrete_component(model, comp_vertices, comp_edges,
                                                bound, counter, options.discrete_cap):
                candidate_vals = dict(values)
                candidate_vals.update(vals)
                phi = _build_discrete_phi(gl, model, candidate_vals)
                if _discrete_cycles_ok(probe, phi):
                    found = (vals, sl)
                    break
            if found is None:
                return SearchResult(
                    "unsat",
                    reason=f"exhaustive search at level {level} found no function; "
                           f"this refutes level {level} only",
                    stats={"assignments": counter[0], "level": level})
            values.update(found[0])
            slopes.update(found[1])
    except _CapExceeded:
        return SearchResult("indeterminate",
                            reason=f"discrete assignment cap {options.discrete_cap} exceeded")

    phi = _build_discrete_phi(gl, model, values)
    return SearchResult("sat", witness=phi,
                        stats={"assignments": counter[0], "level": level})


class _ModelView:
    """A cycle-restricted view of a model for the per-component checks."""

    def __init__(self, model, cycles):
        self.graph = model.graph
        self.cycles = cycles
        self.var_edge_end = model.var_edge_end
        self.model_edges = model.model_edges


def _build_discrete_phi(gl, model, values):
    vals = dict(values)
    for v in gl.vertex_ids():
        vals.setdefault(v, Fraction(0))
    leaf_slopes = {}
    for lid in gl.leaf_ids():
        leaf_slopes[lid] = 1 if lid in model.orth_leaves else 0
    return PLFunction.for_graph(gl, vals, leaf_slopes)


# ---------------------------------------------------------------------------
# Well-spacedness
# ---------------------------------------------------------------------------

def _component_containing(sub, gamma_edges):
    for comp in sub.components():
        if gamma_edges <= comp.edges:
            return comp
    return None


def well_spaced_check(g: EmbeddedGraph, m, c, gamma: Subgraph) -> bool:
    """Whether the minimum boundary distance to the subgraph repeats.

    Preconditions (checked): vertex degrees 2 or 3, complement a forest,
    genus marks zero, and the subgraph bounded, 2-vertex-connected, without
    1-valent vertices, inside the interior of its level component.
    """
    direction = Direction(tuple(m))
    for v in g.vertex_ids():
        if g.degree(v) not in (2, 3):
            raise PreconditionError(f"vertex {v} has degree {g.degree(v)}, not 2 or 3")
        if g.genus_mark(v) != 0:
            raise PreconditionError(f"vertex {v} carries positive genus")
    rep = structure_checks(gamma)
    if not rep.complement_is_forest:
        raise PreconditionError("the complement of the subgraph is not a forest")
    if not rep.two_vertex_connected or rep.has_one_valent_vertex or not gamma.is_bounded():
        raise PreconditionError("the subgraph must be bounded, 2-vertex-connected "
                                "and without 1-valent vertices")
    sub = level_preimage(g, direction.m, c)
    derived = sub.graph
    if not gamma.edges <= sub.edges:
        raise PreconditionError("the subgraph does not lie in the level set")
    comp = _component_containing(sub, gamma.edges)
    gamma_derived = Subgraph.from_elements(derived, edges=sorted(gamma.edges))
    boundary = comp.boundary()
    if set(gamma_derived.vertices) & set(boundary):
        raise PreconditionError("the subgraph touches the boundary of its component")
    distances = sorted(metric_distance(derived, vertex_point(w), gamma_derived)
                       for w in boundary)
    if len(distances) < 2:
        return False
    return distances[0] == distances[1]


def weak_well_spaced_check(g: EmbeddedGraph, m, c) -> bool:
    """False exactly when some positive-genus level component hangs off a
    single trivalent vertex of the ambient graph."""
    direction = Direction(tuple(m))
    sub = level_preimage(g, direction.m, c)
    for comp in sub.components():
        if first_betti(comp) == 0:
            continue
        boundary = comp.boundary()
        if len(boundary) != 1:
            continue
        v = boundary[0]
        if v in sub.virtual_vertices:
            continue  # an edge-interior point is 2-valent in the ambient graph
        if g.degree(v) == 3:
            return False
    return True


# ---------------------------------------------------------------------------
# Full condition replay for discrete candidates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaCheck:
    level: Fraction
    gamma_edges: tuple
    kind: str
    verdict: str
    detail: str = ""


@dataclass(frozen=True)
class TheoremReport:
    non_negative: bool
    condition1: tuple  # (ok, violations)
    condition2: tuple
    condition3: tuple
    gamma_checks: tuple

    @property
    def ok(self):
        return (self.non_negative and self.condition1[0] and self.condition2[0]
                and self.condition3[0]
                and all(c.verdict != "not_ample" for c in self.gamma_checks))


def _extend_phi_to_derived(base, derived, phi):
    values = dict(phi.values)
    leaf_slopes = dict(phi.leaf_slopes)
    for vid in derived.vertex_ids():
        if vid in values or not vid.startswith("cut:"):
            continue
        name = vid[len("cut:"):]
        if name in base.edges:
            lo = derived.edges[f"{name}:lo"]
            t = lo.length / base.edges[name].length
            a, b = base.edges[name].ends
            values[vid] = phi.values[a] + t * (phi.values[b] - phi.values[a])
        else:
            stub = derived.edges[f"{name}:stub"]
            anchor = base.leaves[name].vertex
            travelled = stub.length * stub.multiplicity
            values[vid] = phi.values[anchor] + travelled * phi.leaf_slopes.get(name, 0)
    return PLFunction(values, leaf_slopes)


def check_theorem1(phi: PLFunction, m, p: ParamMap | None, level=1,
                   options: SearchOptions | None = None,
                   graph: EmbeddedGraph | None = None) -> TheoremReport:
    """Replay every condition against a discrete candidate on a subdivision.

    Conditions on slopes and the linear system are exact; the section
    condition is checked over all cycles and 2-connected blocks of every
    level component (plus connected subgraphs up to ``options.gamma_budget``
    edges), with the verdict of the sharpest applicable decider.
    """
    options = options or SearchOptions()
    direction = Direction(tuple(m))
    if graph is None:
        if p is None:
            raise PreconditionError("need a parameterization or an explicit graph")
        graph = subdivide(pullback_embedding(p), level)
    gl = graph

    viol1, viol2, viol3 = [], [], []
    nonneg = all(v >= 0 for v in phi.values.values())
    k = canonical_divisor(gl)
    total = laplacian(gl, phi) + k
    for v in gl.vertex_ids():
        if total.coefficient(v) < 0:
            viol1.append(v)
    for eid in gl.edge_ids():
        pairing = vec_dot(direction.m, gl.displacement(eid))
        a, b = gl.edges[eid].ends
        if pairing != 0:
            if phi.values[a] != 0 or phi.values[b] != 0:
                viol2.append(eid)
        else:
            if slope_away(gl, phi, a, eid) == 0:
                viol3.append(eid)
    for lid in gl.leaf_ids():
        pairing = vec_dot(direction.m, gl.leaf_directions[lid])
        s = phi.leaf_slopes.get(lid, 0)
        anchor = gl.leaves[lid].vertex
        if pairing != 0:
            if s != 0 or phi.values[anchor] != 0:
                viol2.append(lid)
        else:
            if s == 0:
                viol3.append(lid)
            if s < 0:
                nonneg = False

    checks = []
    levels = sorted({level_value(gl, direction.m, v) for v in gl.vertex_ids()})
    for c in levels:
        sub = level_preimage(gl, direction.m, c)
        derived = sub.graph
        phi_ext = _extend_phi_to_derived(gl, derived, phi) if derived is not gl else phi
        for comp in sub.components():
            if not comp.edges:
                continue
            candidates = {}
            for cyc in simple_cycles(comp, cap=options.cycle_cap):
                candidates[cyc] = "cycle"
            for blk in blocks(comp):
                if len(blk) >= 2 or (len(blk) == 1 and
                                     derived.edges[blk[0]].ends[0]
                                     == derived.edges[blk[0]].ends[1]):
                    candidates.setdefault(blk, "block")
            if options.gamma_budget:
                for extra in _connected_subgraphs(comp, options.gamma_budget):
                    candidates.setdefault(extra, "budget")
            boundary = set(comp.boundary())
            for edges_key in sorted(candidates):
                gamma = Subgraph.from_elements(derived, edges=list(edges_key))
                if gamma.vertices & boundary:
                    continue
                verdict = ample(phi_ext, gamma, comp)
                checks.append(GammaCheck(c, edges_key, candidates[edges_key],
                                         verdict.status, verdict.detail))
    return TheoremReport(
        non_negative=nonneg,
        condition1=(not viol1, tuple(viol1)),
        condition2=(not viol2, tuple(viol2)),
        condition3=(not viol3, tuple(viol3)),
        gamma_checks=tuple(checks),
    )


def _connected_subgraphs(comp, max_edges):
    """All connected edge subsets of the component up to the given size."""
    g = comp.graph
    out = set()
    edges = sorted(comp.edges)
    for seed in edges:
        seen = {frozenset([seed])}
        out.add((seed,))
        stack = [frozenset([seed])]
        while stack:
            cur = stack.pop()
            if len(cur) >= max_edges:
                continue
            touched = {v for e in cur for v in g.edges[e].ends}
            for e in edges:
                if e in cur:
                    continue
                if set(g.edges[e].ends) & touched:
                    nxt = cur | {e}
                    if nxt not in seen:
                        seen.add(nxt)
                        out.add(tuple(sorted(nxt)))
                        stack.append(nxt)
    return sorted(out)
