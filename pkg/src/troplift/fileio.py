"""Graph and function file formats.

Graphs are stored as JSON with every rational serialized as a "p/q" string
(or plain "p"); no floats appear in any file.  ``save_graph`` writes a
canonical form -- keys sorted, records sorted by id, two-space indent -- so
that save(load(f)) is byte-identical for canonicalized files, and the
SHA-256 of that form identifies the graph in certificates.

Loaders enforce every construction invariant plus balancedness for embedded
graphs and reject bad input with a best-effort line number.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .divisor import PLFunction
from .errors import GraphFileError, InvariantError
from .graph import AbstractGraph, Edge, EmbeddedGraph, Leaf, Vertex, check_balanced

GRAPH_FORMAT = "troplift-graph/1"
PLF_FORMAT = "troplift-plfunction/1"


def _frac(value) -> str:
    return str(Fraction(value))


def graph_to_dict(g) -> dict:
    embedded = isinstance(g, EmbeddedGraph)
    out = {
        "format": GRAPH_FORMAT,
        "abstract": not embedded,
        "vertices": [],
        "edges": [],
        "leaves": [],
    }
    if embedded:
        out["ambient_dim"] = g.ambient_dim
    for vid in g.vertex_ids():
        v = g.vertices[vid]
        rec = {"id": v.id, "genus": v.genus}
        if embedded:
            rec["position"] = [_frac(x) for x in g.positions[vid]]
        out["vertices"].append(rec)
    for eid in g.edge_ids():
        e = g.edges[eid]
        out["edges"].append({
            "id": e.id,
            "ends": list(e.ends),
            "multiplicity": e.multiplicity,
            "length": _frac(e.length),
        })
    for lid in g.leaf_ids():
        l = g.leaves[lid]
        rec = {"id": l.id, "vertex": l.vertex, "multiplicity": l.multiplicity}
        if embedded:
            rec["direction"] = [int(x) for x in g.leaf_directions[lid]]
        out["leaves"].append(rec)
    return out


def _find_line(text, needle):
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def graph_from_dict(data, path=None, raw=""):
    def fail(message, anchor=None):
        line = _find_line(raw, anchor) if anchor else None
        raise GraphFileError(message, path=path, line=line)

    if data.get("format") != GRAPH_FORMAT:
        fail(f"unsupported format {data.get('format')!r}")
    try:
        vertices = [Vertex(rec["id"], int(rec.get("genus", 0)))
                    for rec in data.get("vertices", [])]
        edges = [Edge(rec["id"], tuple(rec["ends"]), int(rec.get("multiplicity", 1)),
                      Fraction(str(rec.get("length", "1"))))
                 for rec in data.get("edges", [])]
        leaves = [Leaf(rec["id"], rec["vertex"], int(rec.get("multiplicity", 1)))
                  for rec in data.get("leaves", [])]
    except (KeyError, ValueError, TypeError) as exc:
        fail(f"malformed record: {exc}")

    if data.get("abstract"):
        try:
            return AbstractGraph(vertices, edges, leaves)
        except InvariantError as exc:
            fail(str(exc))

    try:
        positions = {rec["id"]: tuple(Fraction(str(x)) for x in rec["position"])
                     for rec in data.get("vertices", [])}
        directions = {rec["id"]: tuple(int(x) for x in rec["direction"])
                      for rec in data.get("leaves", [])}
    except (KeyError, ValueError, TypeError) as exc:
        fail(f"missing or malformed position/direction: {exc}")
    try:
        g = EmbeddedGraph(int(data["ambient_dim"]), vertices, edges, leaves,
                          positions, directions)
    except InvariantError as exc:
        anchor = None
        for token in str(exc).split("'"):
            if token and (token in positions or token in directions
                          or any(e.id == token for e in edges)):
                anchor = f'"{token}"'
                break
        fail(str(exc), anchor)
    verdict = check_balanced(g)
    if not verdict.ok:
        worst = sorted(verdict.residuals)[0]
        fail(f"graph is not balanced; residual at vertex {worst!r} is "
             f"{tuple(map(str, verdict.residuals[worst]))}", f'"{worst}"')
    return g


def load_graph(path):
    """Read and validate a graph file; embedded graphs must balance."""
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise GraphFileError(f"cannot read file: {exc}", path=str(path))
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"invalid JSON: {exc.msg}", path=str(path), line=exc.lineno)
    return graph_from_dict(data, path=str(path), raw=raw)


def canonical_graph_bytes(g) -> bytes:
    return (json.dumps(graph_to_dict(g), indent=2, sort_keys=True) + "\n").encode()


def save_graph(g, path):
    Path(path).write_bytes(canonical_graph_bytes(g))


def graph_hash(g) -> str:
    return hashlib.sha256(canonical_graph_bytes(g)).hexdigest()


# ---------------------------------------------------------------------------
# Piecewise-linear function files
# ---------------------------------------------------------------------------

def plfunction_to_dict(phi: PLFunction) -> dict:
    return {
        "format": PLF_FORMAT,
        "infinite": phi.infinite,
        "values": {v: _frac(x) for v, x in sorted(phi.values.items())},
        "leaf_slopes": {l: int(s) for l, s in sorted(phi.leaf_slopes.items())},
    }


def load_plfunction(path, graph=None) -> PLFunction:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise GraphFileError(f"cannot read file: {exc}", path=str(path))
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"invalid JSON: {exc.msg}", path=str(path), line=exc.lineno)
    if data.get("format") != PLF_FORMAT:
        raise GraphFileError(f"unsupported format {data.get('format')!r}", path=str(path))
    if data.get("infinite"):
        return PLFunction.infinite_function()
    values = {v: Fraction(str(x)) for v, x in data.get("values", {}).items()}
    slopes = {l: int(s) for l, s in data.get("leaf_slopes", {}).items()}
    if graph is not None:
        try:
            return PLFunction.for_graph(graph, values, slopes)
        except InvariantError as exc:
            raise GraphFileError(str(exc), path=str(path))
    return PLFunction(values, slopes)


def save_plfunction(phi, path):
    Path(path).write_text(json.dumps(plfunction_to_dict(phi), indent=2, sort_keys=True)
                          + "\n")
