"""Command line front end.

Results go to stdout (JSON unless noted); failures print a JSON error object
to stderr and exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import graph as gmod
from .calculus import minimize
from .cover import covering_loads, report_to_dict, resolve_cyclic, resolve_from_covering
from .curve import branches_from_json, resolve_curve
from .errors import ParseError, SinglinkError
from .lens import hj_expand, lens_equivalent, lens_of_quasi_ordinary, parse_fraction, parse_lens, resolve_quasi_ordinary
from .normalization import (
    compose_curlings_and_identifications,
    hyperplane_branch_count,
    is_manifold_link,
    parse_branch_list,
    pinched_model,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None


def _load_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None


def _dump(obj):
    return json.dumps(obj, indent=2)


def _write(directory, name, text):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)


def _jobs_map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# subcommands


def cmd_hj(args, out):
    n, q = parse_fraction(args.fraction)
    out.write(str(hj_expand(n, q)) + "\n")


def cmd_quasi_ordinary(args, out):
    out.write(str(resolve_quasi_ordinary(args.n, args.q)) + "\n")
    out.write(str(lens_of_quasi_ordinary(args.n, args.q)) + "\n")


def cmd_lens_eq(args, out):
    l1, l2 = parse_lens(args.first), parse_lens(args.second)
    out.write(("true" if lens_equivalent(l1, l2, oriented=not args.unoriented) else "false") + "\n")


def _check_one(path):
    try:
        g = gmod.loads(_read(path))
        return {
            "file": str(path),
            "determinant": gmod.json_int(gmod.determinant(g)),
            "negative_definite": gmod.is_negative_definite(g),
            "bamboo": gmod.is_bamboo(g),
        }
    except SinglinkError as exc:
        return {"file": str(path), **exc.to_json()}


def cmd_check(args, out):
    results = _jobs_map(_check_one, args.graphs, args.jobs)
    for r in results:
        out.write(json.dumps(r) + "\n")
    failed = [r for r in results if "error" in r]
    if failed:
        raise _Reported(failed[0])


def cmd_minimize(args, out):
    g = gmod.loads(_read(args.graph))
    m, certs = minimize(g, strict=not args.allow_unknown)
    stem = Path(args.graph).stem
    if args.emit_json:
        _write(args.emit_json, f"{stem}_minimal.json", gmod.dumps(m, indent=2) + "\n")
    if args.emit_dot:
        _write(args.emit_dot, f"{stem}_minimal.dot", gmod.to_dot(m, f"{stem} minimal"))
    out.write(_dump({"graph": gmod.graph_to_dict(m), "certificates": [c.to_json() for c in certs]}) + "\n")


def cmd_resolve_curve(args, out):
    branches = branches_from_json(_load_json(args.curve))
    res = resolve_curve(branches, budget=args.budget)
    stem = Path(args.curve).stem
    if args.emit_json:
        _write(args.emit_json, f"{stem}_resolution.json", gmod.dumps(res.graph, indent=2) + "\n")
    if args.emit_dot:
        _write(args.emit_dot, f"{stem}_resolution.dot", gmod.to_dot(res.graph, f"{stem} resolution"))
    out.write(_dump({
        "graph": gmod.graph_to_dict(res.graph),
        "transverse": list(res.transverse),
        "blowups": res.blowups,
    }) + "\n")


def _cyclic_one(job):
    text, d, do_min, budget = job
    try:
        branches = branches_from_json(text)
        return {"d": d, **report_to_dict(resolve_cyclic(branches, d, minimize=do_min, budget=budget))}
    except SinglinkError as exc:
        return {"d": d, **exc.to_json()}


def _emit_report(args, stem, report):
    if args.emit_json:
        _write(args.emit_json, f"{stem}.json", _dump(report) + "\n")
    if args.emit_dot:
        for stage in ("curve_resolution", "resolved", "minimal"):
            if stage in report:
                g = gmod.graph_from_dict(report[stage])
                _write(args.emit_dot, f"{stem}_{stage}.dot", gmod.to_dot(g, f"{stem} {stage}"))


def cmd_cyclic_cover(args, out):
    if (args.curve is None) == (args.covering is None):
        raise ParseError("give exactly one of --curve or --covering")
    if args.covering is not None:
        cov = covering_loads(_read(args.covering))
        report = report_to_dict(resolve_from_covering(cov, minimize=args.minimize))
        _emit_report(args, Path(args.covering).stem, report)
        out.write(_dump(report) + "\n")
        return
    if not args.d:
        raise ParseError("cyclic-cover needs at least one -d")
    text = _read(args.curve)
    branches_from_json(text)  # fail early on bad input
    jobs = [(text, d, args.minimize, args.budget) for d in args.d]
    reports = _jobs_map(_cyclic_one, jobs, args.jobs)
    stem = Path(args.curve).stem
    for r in reports:
        if "error" not in r:
            _emit_report(args, f"{stem}_d{r['d']}", r)
    out.write(_dump(reports[0] if len(reports) == 1 else reports) + "\n")
    failed = [r for r in reports if "error" in r]
    if failed:
        raise _Reported(failed[0])


def cmd_normalization(args, out):
    data = parse_branch_list(args.branches)
    rows = []
    for b in data:
        model = pinched_model(b)
        dec = compose_curlings_and_identifications(b)
        rows.append({
            "degrees": list(b.degrees),
            "k": hyperplane_branch_count(b),
            "cycle_type": list(model.cycle_type),
            "steps": [str(s) for s in dec.steps],
        })
    out.write(_dump({"branches": rows, "manifold_link": is_manifold_link(data)}) + "\n")


class _Reported(Exception):
    """A sub-result already printed on stdout carried an error."""

    def __init__(self, payload):
        super().__init__(payload.get("message", ""))
        self.payload = payload


def build_parser():
    p = _Parser(prog="singlink", description="Resolution graphs, lens spaces and cyclic covers of surface singularities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("hj", help="negative continued fraction of n/q")
    s.add_argument("fraction", help="n/q, e.g. 12/5")
    s.set_defaults(func=cmd_hj)

    s = sub.add_parser("quasi-ordinary", help="bamboo and lens space of z^n = x y^q")
    s.add_argument("n", type=int)
    s.add_argument("q", type=int)
    s.set_defaults(func=cmd_quasi_ordinary)

    s = sub.add_parser("lens-eq", help="decide whether two lens spaces are homeomorphic")
    s.add_argument("first", help="L(n,q)")
    s.add_argument("second", help="L(n,q)")
    s.add_argument("--unoriented", action="store_true", help="allow orientation reversal")
    s.set_defaults(func=cmd_lens_eq)

    s = sub.add_parser("check", help="determinant, definiteness and bamboo test of graph files")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("minimize", help="blow down to the minimal good graph")
    s.add_argument("graph")
    s.add_argument("--allow-unknown", action="store_true", help="skip vertices with unknown Euler number")
    s.add_argument("--emit-json", metavar="DIR")
    s.add_argument("--emit-dot", metavar="DIR")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("resolve-curve", help="embedded resolution of a curve given by Puiseux branches")
    s.add_argument("curve")
    s.add_argument("--budget", type=int, default=None, help="maximum number of blow-ups")
    s.add_argument("--emit-json", metavar="DIR")
    s.add_argument("--emit-dot", metavar="DIR")
    s.set_defaults(func=cmd_resolve_curve)

    s = sub.add_parser("cyclic-cover", help="resolution graph of z^d = f")
    s.add_argument("--curve", help="branch data of f (JSON)")
    s.add_argument("--covering", help="explicit covering data (JSON) instead of --curve")
    s.add_argument("-d", type=int, action="append", help="cover degree; repeat for several")
    s.add_argument("--minimize", action="store_true")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--emit-json", metavar="DIR")
    s.add_argument("--emit-dot", metavar="DIR")
    s.set_defaults(func=cmd_cyclic_cover)

    s = sub.add_parser("normalization", help="pinched solid tori along the singular locus")
    s.add_argument("--branches", required=True, help='e.g. "2,1,3;1"')
    s.set_defaults(func=cmd_normalization)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except SinglinkError as exc:
        err.write(json.dumps(exc.to_json()) + "\n")
        return 2
    except _Reported as exc:
        err.write(json.dumps(exc.payload) + "\n")
        return 2
    return 0


run = main


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
