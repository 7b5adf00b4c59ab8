"""Command-line interface.

Exit codes: 0 for pass/satisfiable/not-obstructed, 1 for fail/refuted/
obstructed, 2 for indeterminate, 64 for usage errors, 65 for bad input
files, 66 for missing files.  Every subcommand accepts ``--json`` for
machine-readable output on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .certificate import ObstructionCertificate, validate_certificate_report
from .divisor import canonical_divisor, laplacian
from .errors import GraphFileError, PreconditionError, TropliftError
from .fileio import graph_hash, load_graph, load_plfunction
from .graph import EmbeddedGraph, Subgraph, check_balanced
from .obstruct import ObstructOptions, obstruct, report_to_dict
from .search import SearchOptions, phi_search_discrete, phi_search_stable, \
    weak_well_spaced_check, well_spaced_check

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EX_USAGE)


def _parse_direction(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SystemExit(EX_USAGE)


def _emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _load(path):
    p = Path(path)
    if not p.exists():
        sys.stderr.write(f"error: no such file: {path}\n")
        raise SystemExit(EX_NOINPUT)
    try:
        return load_graph(p)
    except GraphFileError as exc:
        sys.stderr.write(f"error: {exc}\n")
        raise SystemExit(EX_DATAERR)


def _require_embedded(g, path):
    if not isinstance(g, EmbeddedGraph):
        sys.stderr.write(f"error: {path} holds an abstract graph; this command "
                         f"needs an embedded one\n")
        raise SystemExit(EX_DATAERR)
    return g


def build_parser():
    parser = _Parser(prog="troplift",
                     description="level-set lifting obstructions for balanced "
                                 "weighted integral graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="structural verdicts")
    check_sub = check.add_subparsers(dest="what", required=True)

    p = check_sub.add_parser("balance", help="weighted balancing at every vertex")
    p.add_argument("graph")
    p.add_argument("--json", action="store_true")

    p = check_sub.add_parser("well-spaced",
                             help="minimum boundary distance achieved twice")
    p.add_argument("graph")
    p.add_argument("--m", required=True, help="direction, e.g. 0,0,1")
    p.add_argument("--c", required=True, help="level, a rational like 3/2")
    p.add_argument("--gamma", required=True,
                   help="comma-separated edge ids of the inner cycle")
    p.add_argument("--json", action="store_true")

    p = check_sub.add_parser("weak-well-spaced",
                             help="no positive-genus level component hangs off "
                                  "a single trivalent vertex")
    p.add_argument("graph")
    p.add_argument("--m", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--json", action="store_true")

    div = sub.add_parser("divisor", help="divisors of graphs and functions")
    div_sub = div.add_subparsers(dest="what", required=True)

    p = div_sub.add_parser("canonical", help="deg(v) + 2g(v) - 2 at every vertex")
    p.add_argument("graph")
    p.add_argument("--json", action="store_true")

    p = div_sub.add_parser("laplacian", help="divisor of a piecewise-linear function")
    p.add_argument("graph")
    p.add_argument("plfunction")
    p.add_argument("--json", action="store_true")

    par = sub.add_parser("params", help="parameterizations of a target graph")
    par_sub = par.add_subparsers(dest="what", required=True)
    p = par_sub.add_parser("enumerate", help="all parameterizations of a genus")
    p.add_argument("graph")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--json", action="store_true")

    srch = sub.add_parser("search", help="level-set function search")
    srch_sub = srch.add_subparsers(dest="what", required=True)
    p = srch_sub.add_parser("phi", help="search one direction")
    p.add_argument("graph")
    p.add_argument("--m", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--l", type=int, default=None,
                      help="discrete search at this subdivision level")
    mode.add_argument("--stable", action="store_true",
                      help="subdivision-stable search (default)")
    p.add_argument("--cert-out", default=None,
                   help="write the refutation certificate here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("obstruct", help="full obstruction run over a genus")
    p.add_argument("graph")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--directions", default=None,
                   help="file with one extra direction per line, e.g. 0,0,1")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", default=None,
                   help="report path (default: <graph stem>.obstruction.json)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("certify", help="replay a certificate or report")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--json", action="store_true")
    return parser


def _cmd_balance(args):
    g = _require_embedded(_load(args.graph), args.graph)
    verdict = check_balanced(g)
    residuals = {v: [str(x) for x in r] for v, r in verdict.residuals.items()}
    _emit(args, {"command": "check balance", "ok": verdict.ok,
                 "residuals": residuals, "exit_code": 0 if verdict.ok else 1},
          "balanced" if verdict.ok else f"unbalanced at {sorted(residuals)}")
    return 0 if verdict.ok else 1


def _cmd_well_spaced(args):
    g = _require_embedded(_load(args.graph), args.graph)
    gamma_edges = [e for e in args.gamma.split(",") if e]
    try:
        gamma = Subgraph.from_elements(g, edges=gamma_edges)
        ok = well_spaced_check(g, _parse_direction(args.m), Fraction(args.c), gamma)
    except (PreconditionError, KeyError, TropliftError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_DATAERR
    _emit(args, {"command": "check well-spaced", "ok": ok,
                 "exit_code": 0 if ok else 1},
          "well-spaced" if ok else "not well-spaced")
    return 0 if ok else 1


def _cmd_weak_well_spaced(args):
    g = _require_embedded(_load(args.graph), args.graph)
    ok = weak_well_spaced_check(g, _parse_direction(args.m), Fraction(args.c))
    _emit(args, {"command": "check weak-well-spaced", "ok": ok,
                 "exit_code": 0 if ok else 1},
          "passes" if ok else "a positive-genus level component hangs off a "
                              "single trivalent vertex")
    return 0 if ok else 1


def _cmd_canonical(args):
    g = _load(args.graph)
    k = canonical_divisor(g)
    coeffs = {v: k.coefficient(v) for v in g.vertex_ids()}
    _emit(args, {"command": "divisor canonical", "coefficients": coeffs,
                 "degree": k.degree(), "exit_code": 0},
          " ".join(f"{v}:{c}" for v, c in sorted(coeffs.items())))
    return 0


def _cmd_laplacian(args):
    g = _load(args.graph)
    try:
        phi = load_plfunction(args.plfunction, g)
        d = laplacian(g, phi)
    except (GraphFileError, TropliftError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_DATAERR
    coeffs = {v: d.coefficient(v) for v in g.vertex_ids()}
    _emit(args, {"command": "divisor laplacian", "coefficients": coeffs,
                 "degree": d.degree(), "exit_code": 0},
          " ".join(f"{v}:{c}" for v, c in sorted(coeffs.items())))
    return 0


def _cmd_params(args):
    from .parameterization import enumerate_parameterizations

    g = _require_embedded(_load(args.graph), args.graph)
    try:
        result = enumerate_parameterizations(g, args.genus)
    except TropliftError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_DATAERR
    listing = [p.describe() for p in result.maps]
    _emit(args, {"command": "params enumerate", "genus": args.genus,
                 "count": result.raw_count,
                 "distinct_up_to_symmetry": result.distinct_up_to_symmetry,
                 "parameterizations": listing, "exit_code": 0},
          f"{result.raw_count} parameterization(s), "
          f"{result.distinct_up_to_symmetry} up to target symmetry")
    return 0


def _status_exit(status):
    return {"sat": 0, "not_obstructed": 0, "unsat": 1, "obstructed": 1}.get(status, 2)


def _cmd_search(args):
    g = _require_embedded(_load(args.graph), args.graph)
    m = _parse_direction(args.m)
    if args.l is not None:
        res = phi_search_discrete(g, None, m, args.l)
    else:
        res = phi_search_stable(g, None, m)
    code = _status_exit(res.status)
    payload = {"command": "search phi", "status": res.status, "reason": res.reason,
               "stats": res.stats, "exit_code": code}
    if res.certificate is not None:
        out = args.cert_out or f"{Path(args.graph).stem}.cert.json"
        Path(out).write_text(json.dumps(res.certificate.to_dict(), indent=2,
                                        sort_keys=True) + "\n")
        payload["certificate"] = out
        human_extra = f"; certificate written to {out}"
    else:
        human_extra = ""
    _emit(args, payload, f"{res.status}{(': ' + res.reason) if res.reason else ''}"
          + human_extra)
    return code


def _cmd_obstruct(args):
    g = _require_embedded(_load(args.graph), args.graph)
    options = ObstructOptions(jobs=args.jobs)
    if args.directions:
        try:
            lines = Path(args.directions).read_text().splitlines()
        except OSError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EX_NOINPUT
        options.extra_directions = [_parse_direction(l) for l in lines if l.strip()]
    report = obstruct(g, args.genus, options)
    out = args.output or f"{Path(args.graph).stem}.obstruction.json"
    Path(out).write_text(json.dumps(report_to_dict(report), indent=2, sort_keys=True)
                         + "\n")
    code = _status_exit(report.status)
    _emit(args, {"command": "obstruct", "status": report.status,
                 "reason": report.reason, "report": out, "exit_code": code},
          f"{report.status}: {report.reason}\nreport written to {out}")
    return code


def _cmd_certify(args):
    g = _require_embedded(_load(args.graph), args.graph)
    path = Path(args.certificate)
    if not path.exists():
        sys.stderr.write(f"error: no such file: {path}\n")
        return EX_NOINPUT
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON: {exc}\n")
        return EX_DATAERR
    certs = []
    if data.get("format") == "troplift-certificate/1":
        certs.append(data)
    elif data.get("format") == "troplift-obstruction/1":
        for rec in data.get("parameterizations", []):
            if "certificate" in rec:
                certs.append(rec["certificate"])
    else:
        sys.stderr.write(f"error: unsupported format {data.get('format')!r}\n")
        return EX_DATAERR
    if not certs:
        _emit(args, {"command": "certify", "ok": None, "checked": 0,
                     "exit_code": 2},
              "nothing to certify: the file contains no refutation certificates")
        return 2
    results = []
    for i, cd in enumerate(certs):
        try:
            cert = ObstructionCertificate.from_dict(cd)
            ok, reasons = validate_certificate_report(cert, g)
        except TropliftError as exc:
            ok, reasons = False, [str(exc)]
        results.append({"index": i, "ok": ok, "reasons": reasons[:5]})
    all_ok = all(r["ok"] for r in results)
    code = 0 if all_ok else 1
    _emit(args, {"command": "certify", "ok": all_ok, "checked": len(results),
                 "results": results, "exit_code": code},
          f"{'valid' if all_ok else 'INVALID'} ({len(results)} certificate(s))"
          + ("" if all_ok else f"\nfirst failure: {next(r for r in results if not r['ok'])['reasons'][:1]}"))
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            if args.what == "balance":
                return _cmd_balance(args)
            if args.what == "well-spaced":
                return _cmd_well_spaced(args)
            return _cmd_weak_well_spaced(args)
        if args.command == "divisor":
            if args.what == "canonical":
                return _cmd_canonical(args)
            return _cmd_laplacian(args)
        if args.command == "params":
            return _cmd_params(args)
        if args.command == "search":
            return _cmd_search(args)
        if args.command == "obstruct":
            return _cmd_obstruct(args)
        if args.command == "certify":
            return _cmd_certify(args)
        parser.error(f"unknown command {args.command}")
    except GraphFileError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_DATAERR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
