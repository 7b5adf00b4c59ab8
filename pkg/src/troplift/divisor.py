"""Divisors and piecewise-linear functions on genus-marked weighted graphs.

A divisor is an integer-valued function on the vertices.  A piecewise-linear
function is determined by rational vertex values together with one integer
slope per leaf; it interpolates linearly on every bounded edge and must have
integer slope there, measured per unit of stored edge length.  The single
infinite function is a distinguished constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvariantError, UndefinedLaplacianError


@dataclass(frozen=True)
class Divisor:
    """Integer coefficients on vertices; absent vertices carry 0."""

    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {v: int(c) for v, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", cleaned)

    def coefficient(self, v) -> int:
        return self.coefficients.get(v, 0)

    def degree(self) -> int:
        return sum(self.coefficients.values())

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coefficients.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coefficients)
        for v, c in other.coefficients.items():
            out[v] = out.get(v, 0) + c
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({v: -c for v, c in self.coefficients.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)


class PLFunction:
    """Rational vertex values plus integer leaf slopes, linear on bounded edges.

    ``PLFunction.infinite()`` is the constant-infinity function; it has no
    values or slopes.
    """

    def __init__(self, values=None, leaf_slopes=None, infinite=False):
        self.infinite = bool(infinite)
        if self.infinite:
            self.values = {}
            self.leaf_slopes = {}
            return
        self.values = {v: Fraction(x) for v, x in (values or {}).items()}
        self.leaf_slopes = {l: int(s) for l, s in (leaf_slopes or {}).items()}

    @classmethod
    def infinite_function(cls):
        return cls(infinite=True)

    @classmethod
    def for_graph(cls, g, values, leaf_slopes=None):
        """Validated constructor: checks coverage and integer slopes on ``g``."""
        phi = cls(values, leaf_slopes or {})
        for v in g.vertices:
            if v not in phi.values:
                raise InvariantError(f"missing value for vertex {v!r}")
        for lid in g.leaves:
            if lid not in phi.leaf_slopes:
                raise InvariantError(f"missing slope for leaf {lid!r}")
        for eid, e in g.edges.items():
            s = (phi.values[e.ends[1]] - phi.values[e.ends[0]]) / e.length
            if s.denominator != 1:
                raise InvariantError(
                    f"edge {eid!r}: slope {s} is not an integer")
        return phi

    def value(self, v):
        if self.infinite:
            raise InvariantError("the infinite function has no finite values")
        return self.values[v]

    def __add__(self, other: "PLFunction") -> "PLFunction":
        if self.infinite or other.infinite:
            return PLFunction.infinite_function()
        vals = {v: x + other.values[v] for v, x in self.values.items()}
        slopes = {l: s + other.leaf_slopes[l] for l, s in self.leaf_slopes.items()}
        return PLFunction(vals, slopes)

    def shift(self, c) -> "PLFunction":
        if self.infinite:
            return self
        return PLFunction({v: x + Fraction(c) for v, x in self.values.items()},
                          dict(self.leaf_slopes))

    def __eq__(self, other):
        return (isinstance(other, PLFunction) and self.infinite == other.infinite
                and self.values == other.values and self.leaf_slopes == other.leaf_slopes)

    def __repr__(self):
        if self.infinite:
            return "PLFunction(infinite)"
        return f"PLFunction({self.values!r}, {self.leaf_slopes!r})"


def slope_away(g, phi: PLFunction, v, eid) -> int:
    """Slope of ``phi`` along edge ``eid`` oriented away from vertex ``v``."""
    if phi.infinite:
        raise UndefinedLaplacianError("the infinite function has no slopes")
    e = g.edges[eid]
    w = g.other_end(eid, v)
    s = (phi.values[w] - phi.values[v]) / e.length
    if s.denominator != 1:
        raise InvariantError(f"edge {eid!r}: slope {s} is not an integer")
    return int(s)


def canonical_divisor(g) -> Divisor:
    """deg(v) + 2 g(v) - 2 at every vertex."""
    return Divisor({v: g.degree(v) + 2 * g.genus_mark(v) - 2 for v in g.vertices})


def laplacian(g, phi: PLFunction) -> Divisor:
    """Minus the sum of away slopes over incident edges and leaves, per vertex."""
    if phi.infinite:
        raise UndefinedLaplacianError("laplacian of the infinite function is undefined")
    coeffs = {}
    for v in g.vertex_ids():
        total = 0
        for eid in g.incident_edges(v):
            e = g.edges[eid]
            if e.ends[0] == e.ends[1]:
                continue  # both away slopes of a loop cancel
            total += slope_away(g, phi, v, eid)
        for lid in g.incident_leaves(v):
            total += phi.leaf_slopes.get(lid, 0)
        coeffs[v] = -total
    return Divisor(coeffs)


def in_linear_system(g, phi: PLFunction, lam: Divisor) -> bool:
    """Whether laplacian(phi) + lam is effective; the infinite function passes."""
    if phi.infinite:
        return True
    return (laplacian(g, phi) + lam).is_effective()


# ---------------------------------------------------------------------------
# The min-achieved-twice relation
# ---------------------------------------------------------------------------

def _min_twice(a, b, c) -> bool:
    vals = [a, b, c]
    m = min(vals)
    return vals.count(m) >= 2


def _edge_profile(g, phi: PLFunction, eid):
    """(value at end0, value at end1) or None for the infinite function."""
    if phi.infinite:
        return None
    a, b = g.edges[eid].ends
    return (phi.values[a], phi.values[b])


def tropical_triple_check(g, phi1, phi2, phi3) -> bool:
    """Whether the minimum of the three functions is achieved at least twice
    at every point of the bounded part of the graph.

    Exact for edge-linear functions: checked at endpoints, at every pairwise
    crossing parameter inside each edge, and at a sample between consecutive
    breakpoints.
    """
    funcs = (phi1, phi2, phi3)

    def vertex_vals(v):
        return [math.inf if f.infinite else f.values[v] for f in funcs]

    for v in g.vertex_ids():
        if not _min_twice(*vertex_vals(v)):
            return False
    for eid in g.edge_ids():
        a, b = g.edges[eid].ends
        # linear parameterizations f_i(t) on [0, 1]; infinite functions stay infinite
        segs = [None if f.infinite else (f.values[a], f.values[b]) for f in funcs]
        breakpoints = {Fraction(0), Fraction(1)}
        for i, j in combinations(range(3), 2):
            if segs[i] is None or segs[j] is None:
                continue
            dv = (segs[i][1] - segs[i][0]) - (segs[j][1] - segs[j][0])
            if dv != 0:
                t = (segs[j][0] - segs[i][0]) / dv
                if 0 < t < 1:
                    breakpoints.add(t)
        pts = sorted(breakpoints)
        samples = list(pts)
        for p, q in zip(pts, pts[1:]):
            samples.append((p + q) / 2)
        for t in samples:
            vals = [math.inf if seg is None else seg[0] + t * (seg[1] - seg[0])
                    for seg in segs]
            if not _min_twice(*vals):
                return False
    return True


@dataclass(frozen=True)
class HomomorphismReport:
    ok: bool
    checked_pairs: tuple
    skipped_pairs: tuple
    failed_pairs: tuple
    zero_entry_ok: bool


def tropical_homomorphism_check(g, family) -> HomomorphismReport:
    """Check a finite direction-to-function family for the homomorphism law.

    ``family`` maps integer tuples to PLFunctions.  The zero direction, when
    present, must map to the infinite function.  For every unordered pair of
    directions whose sum is also present, the min-achieved-twice relation is
    checked; pairs with missing sums are reported as skipped, not failed.
    """
    keys = sorted(family)
    zero = tuple(0 for _ in keys[0]) if keys else ()
    zero_ok = True
    if keys and zero in family:
        zero_ok = family[zero].infinite
    checked, skipped, failed = [], [], []
    for i, m1 in enumerate(keys):
        for m2 in keys[i:]:
            total = tuple(a + b for a, b in zip(m1, m2))
            if total not in family:
                skipped.append((m1, m2))
                continue
            ok = tropical_triple_check(g, family[m1], family[m2], family[total])
            checked.append((m1, m2))
            if not ok:
                failed.append((m1, m2))
    return HomomorphismReport(
        ok=zero_ok and not failed,
        checked_pairs=tuple(checked),
        skipped_pairs=tuple(skipped),
        failed_pairs=tuple(failed),
        zero_entry_ok=zero_ok,
    )
