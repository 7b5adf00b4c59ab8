"""Top-level decision: can a balanced graph underlie a curve of given genus?

For every parameterization of the requested genus and every candidate
direction, the stable search looks for a satisfying level-set function.  A
parameterization is ruled out by a single refuted direction; the graph is
obstructed when every parameterization is ruled out.  A clean outcome only
reports that the necessary conditions were satisfiable everywhere -- the
converse question stays open and the verdict wording says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EnumerationUnsupportedError
from .fileio import graph_hash
from .graph import EmbeddedGraph, is_indecomposable_vertex
from .model import Direction
from .parameterization import enumerate_parameterizations
from .search import SearchOptions, SearchResult, candidate_directions, phi_search_stable

NOT_OBSTRUCTED_CAVEAT = (
    "no obstruction found: every parameterization admits functions satisfying the "
    "necessary conditions for all candidate directions; this does not prove that "
    "the graph lifts")


@dataclass
class ObstructOptions(SearchOptions):
    extra_directions: list = field(default_factory=list)
    jobs: int = 1


@dataclass
class Leg:
    direction: tuple
    status: str
    reason: str = ""
    certificate: object = None
    witness: object = None


@dataclass
class ParamOutcome:
    index: int
    description: dict
    verdict: str            # "obstructed" | "clean" | "unknown"
    legs: list
    certificate: object = None


@dataclass
class ObstructReport:
    status: str             # "obstructed" | "not_obstructed" | "indeterminate"
    genus: int
    graph_hash: str
    directions: list
    parameterizations: list
    reason: str = ""
    raw_parameterizations: int = 0
    symmetry_classes: int = 0


def _run_leg(args):
    g, p, m, options = args
    return phi_search_stable(g, p, m, options)


def obstruct(g: EmbeddedGraph, genus: int,
             options: ObstructOptions | None = None) -> ObstructReport:
    options = options or ObstructOptions()
    gh = graph_hash(g)

    for v in g.vertex_ids():
        if not is_indecomposable_vertex(g, v):
            return ObstructReport(
                "indeterminate", genus, gh, [], [],
                reason=f"vertex {v} is decomposable; parameterizations cannot be "
                       f"enumerated completely")

    try:
        enumeration = enumerate_parameterizations(g, genus)
    except EnumerationUnsupportedError as exc:
        return ObstructReport("indeterminate", genus, gh, [], [], reason=str(exc))

    directions = candidate_directions(g)
    known = {tuple(d.m) for d in directions}
    for extra in options.extra_directions:
        d = Direction(tuple(extra))
        if tuple(d.m) not in known:
            directions.append(d)
            known.add(tuple(d.m))
    directions.sort(key=lambda d: d.m)

    if enumeration.raw_count == 0:
        return ObstructReport(
            "obstructed", genus, gh, [list(d.m) for d in directions], [],
            reason=f"no parameterization of genus {genus} exists "
                   f"(the graph's own genus is already larger or cannot be reached)",
            raw_parameterizations=0,
            symmetry_classes=0)

    if not directions:
        return ObstructReport(
            "not_obstructed", genus, gh, [], [
                ParamOutcome(i, p.describe(), "clean", [])
                for i, p in enumerate(enumeration.maps)],
            reason="no candidate directions: no cycle lies in a proper affine "
                   "subspace; " + NOT_OBSTRUCTED_CAVEAT,
            raw_parameterizations=enumeration.raw_count,
            symmetry_classes=enumeration.distinct_up_to_symmetry)

    outcomes = []
    for idx, p in enumerate(enumeration.maps):
        legs = []
        verdict = "clean"
        certificate = None
        results = _leg_results(g, p, directions, options)
        for d, res in zip(directions, results):
            if res is None:
                continue
            legs.append(Leg(tuple(d.m), res.status, res.reason,
                            res.certificate, res.witness))
            if res.status == "unsat":
                verdict = "obstructed"
                certificate = res.certificate
                break
            if res.status == "indeterminate" and verdict == "clean":
                verdict = "unknown"
        outcomes.append(ParamOutcome(idx, p.describe(), verdict, legs, certificate))

    if all(o.verdict == "obstructed" for o in outcomes):
        status, reason = "obstructed", ("every parameterization of this genus is "
                                        "refuted by some direction")
    elif all(o.verdict == "clean" for o in outcomes):
        status, reason = "not_obstructed", NOT_OBSTRUCTED_CAVEAT
    else:
        status, reason = "indeterminate", ("some legs were neither satisfied nor "
                                           "refuted (caps or unsupported shapes)")
    return ObstructReport(status, genus, gh, [list(d.m) for d in directions],
                          outcomes, reason=reason,
                          raw_parameterizations=enumeration.raw_count,
                          symmetry_classes=enumeration.distinct_up_to_symmetry)


def _leg_results(g, p, directions, options):
    """Run the legs for one parameterization, lazily and in canonical order.

    With ``jobs > 1`` all legs run eagerly in a process pool; aggregation
    stays order-independent because results are consumed in direction order.
    """
    if options.jobs > 1 and len(directions) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            return list(pool.map(_run_leg,
                                 [(g, p, d, options) for d in directions]))

    def lazy():
        for d in directions:
            yield phi_search_stable(g, p, d, options)

    return lazy()


def report_to_dict(report: ObstructReport) -> dict:
    out = {
        "format": "troplift-obstruction/1",
        "status": report.status,
        "genus": report.genus,
        "graph_hash": report.graph_hash,
        "directions": report.directions,
        "reason": report.reason,
        "raw_parameterizations": report.raw_parameterizations,
        "symmetry_classes": report.symmetry_classes,
        "parameterizations": [],
    }
    for o in report.parameterizations:
        rec = {
            "index": o.index,
            "description": o.description,
            "verdict": o.verdict,
            "legs": [{"direction": list(l.direction), "status": l.status,
                      "reason": l.reason} for l in o.legs],
        }
        if o.certificate is not None:
            rec["certificate"] = o.certificate.to_dict()
        out["parameterizations"].append(rec)
    return out
