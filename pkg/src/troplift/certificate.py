"""Machine-checkable refutation certificates for the stable search.

A certificate records, for one direction and one parameterization, the full
branch tree explored by the search.  Internal nodes split on the sign of a
slope variable or on the argmin set of a constrained cycle; every leaf
carries non-negative multipliers that combine the rows of its branch into a
contradiction.  Validation replays the tree without the search or the LP
solver: it rebuilds the rows from the graph, checks that the children of
every internal node cover all cases, and re-verifies each leaf combination
by exact arithmetic.

A leaf is accepted when its multipliers mu >= 0 satisfy, with
w = sum mu_i * row_i and R = sum mu_i * rhs_i:

* w vanishes on every slope variable (they are free),
* w is <= 0 on every value and leaf variable (they are non-negative),
* D := -w[tau] >= 0, and either D > 0 and R >= 0, or D = 0 and R > 0.

Any candidate would give w . y >= R, i.e. -D*tau >= R, contradicting the
required strict positivity of tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import PreconditionError
from .fileio import graph_from_dict, graph_hash, graph_to_dict
from .model import TAU, Direction, StableModel
from .parameterization import ParamMap, pullback_embedding, verify_parameterization

CERT_FORMAT = "troplift-certificate/1"


@dataclass
class CaseLeaf:
    multipliers: dict
    note: str = ""


@dataclass
class SignNode:
    var: str
    children: dict  # "+" and "-"


@dataclass
class ArgminNode:
    cycle: str
    children: dict  # subset key -> node


def _tree_to_dict(node):
    if isinstance(node, CaseLeaf):
        return {"kind": "dead",
                "multipliers": {k: str(v) for k, v in sorted(node.multipliers.items())},
                "note": node.note}
    if isinstance(node, SignNode):
        return {"kind": "sign", "var": node.var,
                "children": {k: _tree_to_dict(v) for k, v in node.children.items()}}
    if isinstance(node, ArgminNode):
        return {"kind": "argmin", "cycle": node.cycle,
                "children": {k: _tree_to_dict(v) for k, v in node.children.items()}}
    raise PreconditionError(f"unknown tree node {node!r}")


def _tree_from_dict(data):
    kind = data.get("kind")
    if kind == "dead":
        return CaseLeaf({k: Fraction(v) for k, v in data.get("multipliers", {}).items()},
                        data.get("note", ""))
    if kind == "sign":
        return SignNode(data["var"],
                        {k: _tree_from_dict(v) for k, v in data["children"].items()})
    if kind == "argmin":
        return ArgminNode(data["cycle"],
                          {k: _tree_from_dict(v) for k, v in data["children"].items()})
    raise PreconditionError(f"unknown tree node kind {kind!r}")


@dataclass
class ObstructionCertificate:
    direction: tuple
    parameterization: dict      # serialized source graph and maps
    graph_hash: str
    tree: object
    options: dict = field(default_factory=dict)
    tool_version: str = __version__

    @classmethod
    def build(cls, direction, parameterization: ParamMap, tree, merge,
              smooth_candidates, cycle_cap):
        return cls(
            direction=tuple(direction.m),
            parameterization={
                "source": graph_to_dict(parameterization.source),
                "vertex_map": dict(sorted(parameterization.vertex_map.items())),
                "edge_map": dict(sorted(parameterization.edge_map.items())),
                "leaf_map": dict(sorted(parameterization.leaf_map.items())),
            },
            graph_hash=graph_hash(parameterization.target),
            tree=tree,
            options={"merge": merge, "smooth_candidates": smooth_candidates,
                     "cycle_cap": cycle_cap},
        )

    def to_dict(self):
        return {
            "format": CERT_FORMAT,
            "tool_version": self.tool_version,
            "direction": list(self.direction),
            "graph_hash": self.graph_hash,
            "parameterization": self.parameterization,
            "options": self.options,
            "tree": _tree_to_dict(self.tree),
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("format") != CERT_FORMAT:
            raise PreconditionError(f"unsupported certificate format "
                                    f"{data.get('format')!r}")
        return cls(
            direction=tuple(int(x) for x in data["direction"]),
            parameterization=data["parameterization"],
            graph_hash=data["graph_hash"],
            tree=_tree_from_dict(data["tree"]),
            options=dict(data.get("options", {})),
            tool_version=data.get("tool_version", "unknown"),
        )

    def rebuild_parameterization(self, target) -> ParamMap:
        source = graph_from_dict(self.parameterization["source"])
        return ParamMap(
            source=source,
            target=target,
            vertex_map=dict(self.parameterization["vertex_map"]),
            edge_map=dict(self.parameterization["edge_map"]),
            leaf_map=dict(self.parameterization["leaf_map"]),
        )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def check_dead_combination(rows_by_id, multipliers, nonneg_vars):
    """Why a multiplier combination fails to refute its branch, or None.

    Implements the acceptance rule from the module docstring by plain
    arithmetic over the provided rows.
    """
    combo = {}
    rhs_total = Fraction(0)
    for rid, mu in multipliers.items():
        mu = Fraction(mu)
        if mu < 0:
            return f"negative multiplier on row {rid}"
        if mu == 0:
            continue
        row = rows_by_id.get(rid)
        if row is None:
            return f"row {rid} is not available in this branch"
        rhs_total += mu * row.rhs
        for var, c in row.coeffs.items():
            combo[var] = combo.get(var, Fraction(0)) + mu * c
    d = -combo.pop(TAU, Fraction(0))
    if d < 0:
        return "combination has positive coefficient on the strictness variable"
    for var, c in combo.items():
        if c == 0:
            continue
        if var in nonneg_vars:
            if c > 0:
                return f"combination has positive coefficient on non-negative {var}"
        else:
            return f"combination does not cancel free variable {var}"
    if d > 0:
        if rhs_total < 0:
            return "combined bound does not force the strictness variable below zero"
    else:
        if rhs_total <= 0:
            return "combination proves nothing (zero strictness mass, non-positive rhs)"
    return None


def _check_leaf(model, leaf: CaseLeaf, signs, cycles):
    rows = {r.id: r for r in model.base_rows()}
    for var, sign in signs.items():
        row = model.sign_row(var, sign)
        rows[row.id] = row
    for key, subset in cycles.items():
        for row in model.argmin_rows(key, subset, signs):
            rows[row.id] = row
    return check_dead_combination(rows, leaf.multipliers, model.nonneg_vars)


def _subset_keys(candidates):
    items = sorted(candidates)
    keys = []
    for mask in range(1, 1 << len(items)):
        sub = tuple(items[i] for i in range(len(items)) if mask & (1 << i))
        keys.append(",".join(sub))
    return set(keys)


def _walk(model, node, signs, cycles, reasons, path="root"):
    if isinstance(node, CaseLeaf):
        err = _check_leaf(model, node, signs, cycles)
        if err:
            reasons.append(f"{path}: {err}")
        return
    if isinstance(node, SignNode):
        if node.var not in model.var_edge_end:
            reasons.append(f"{path}: unknown slope variable {node.var}")
            return
        if node.var in signs:
            reasons.append(f"{path}: slope {node.var} decided twice")
            return
        if set(node.children) != {"+", "-"}:
            reasons.append(f"{path}: sign split on {node.var} does not cover both signs")
            return
        for sign in ("+", "-"):
            child_signs = dict(signs)
            child_signs[node.var] = sign
            _walk(model, node.children[sign], child_signs, cycles, reasons,
                  f"{path}/{node.var}{sign}")
        return
    if isinstance(node, ArgminNode):
        cyc = model.cycle_by_key.get(node.cycle)
        if cyc is None:
            reasons.append(f"{path}: unknown cycle {node.cycle}")
            return
        if node.cycle in cycles:
            reasons.append(f"{path}: cycle {node.cycle} decided twice")
            return
        expected = _subset_keys(cyc.candidates)
        if set(node.children) != expected:
            missing = sorted(expected - set(node.children))
            extra = sorted(set(node.children) - expected)
            reasons.append(f"{path}: argmin split on {node.cycle} has a cover gap "
                           f"(missing {missing[:3]}, extra {extra[:3]})")
            return
        for key in sorted(node.children):
            child_cycles = dict(cycles)
            child_cycles[node.cycle] = tuple(key.split(","))
            _walk(model, node.children[key], signs, child_cycles, reasons,
                  f"{path}/{node.cycle}[{key}]")
        return
    reasons.append(f"{path}: unknown node type {type(node).__name__}")


def validate_certificate_report(cert: ObstructionCertificate, g, p=None, m=None):
    """Full replay; returns (ok, list of reasons)."""
    reasons = []
    if m is not None and tuple(Direction(tuple(m)).m) != tuple(cert.direction):
        reasons.append("direction does not match the certificate")
    if graph_hash(g) != cert.graph_hash:
        reasons.append("graph hash does not match the certificate")
    try:
        rebuilt = cert.rebuild_parameterization(g)
    except Exception as exc:  # malformed embedded parameterization
        return False, reasons + [f"cannot rebuild parameterization: {exc}"]
    if p is not None:
        if (p.source != rebuilt.source or dict(p.vertex_map) != rebuilt.vertex_map
                or dict(p.edge_map) != rebuilt.edge_map
                or dict(p.leaf_map) != rebuilt.leaf_map):
            reasons.append("parameterization does not match the certificate")
    report = verify_parameterization(rebuilt)
    if not report.ok:
        reasons.append("certificate parameterization fails verification")
    if reasons:
        return False, reasons
    pb = pullback_embedding(rebuilt)
    model = StableModel(pb, Direction(cert.direction),
                        merge=cert.options.get("merge", True),
                        smooth_candidates=cert.options.get("smooth_candidates", False),
                        cycle_cap=cert.options.get("cycle_cap", 64))
    if model.all_orthogonal:
        return False, ["the direction annihilates the image; nothing can be refuted"]
    _walk(model, cert.tree, {}, {}, reasons)
    return not reasons, reasons


def validate_certificate(cert: ObstructionCertificate, g, p=None, m=None) -> bool:
    ok, _ = validate_certificate_report(cert, g, p, m)
    return ok
