"""Command-line entry point: ``kfv <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .belyi import (
    DEFAULT_BUDGET, check_riemann_hurwitz, parse_profile, realizable_as_permutation_triple,
    verify_rational_belyi,
)
from .exact_arith import jacobian
from .expr import ExpressionError, parse_poly
from .intersection import determinant_labels
from .kfw_format import ParseError, load
from .picard_map import StructuralError, degree_pair, propagate_valuations
from .surface_graph import GraphError, canonical_form
from .verify import verify


def export_dot(g, name="surface"):
    lines = [f'graph "{name}" {{']
    for c in g.ids():
        lines.append(f'  {c} [label="{c}: K̄={g.kbar(c)}, E²={g.self_int(c)}"];')
    for a, b in g.edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _surface(ff, name):
    if name not in ff.surfaces:
        raise KeyError(f"no surface named {name!r}; have {', '.join(ff.surfaces)}")
    return ff.surfaces[name]


def cmd_verify(args):
    report = verify(load(args.file))
    out = report.to_json() + "\n" if args.report == "json" else report.to_text()
    sys.stdout.write(out)
    return report.exit_code


def cmd_labels(args):
    g = _surface(load(args.file), args.surface)
    labels = determinant_labels(g, method=args.method)
    for c in g.ids():
        print(f"{c}\tkbar={g.kbar(c)}\tselfint={g.self_int(c)}\tdet={labels[c]}")
    return 0


def cmd_dot(args):
    g = _surface(load(args.file), args.surface)
    sys.stdout.write(export_dot(g, args.surface))
    return 0


def cmd_degrees(args):
    ff = load(args.file)
    m = ff.framework()
    v = ff.valuation_vector()
    if m is None or v is None:
        print("file needs a map and a valuations block", file=sys.stderr)
        return 2
    m.validate()
    vz = propagate_valuations(m, v)
    for E in sorted(vz):
        print(f"Z{E}\t{vz[E][0]}\t{vz[E][1]}")
    if ff.chain:
        chain = degree_pair(m, v, ff.chain)
        for s in chain.steps:
            print(f"{s['step']}\tkbar={s['kbar']}\t{s['valuation'][0]}\t{s['valuation'][1]}")
        print(f"degree_pair: ({chain.total[0]},{chain.total[1]})")
        (a1, b1), (a2, b2) = chain.separate
        print(f"separate_degrees: y1 ({a1},{b1}) y2 ({a2},{b2})")
    return 0


def cmd_construct(args):
    ff = load(args.file)
    names = [args.surface] if args.surface else list(ff.surfaces)
    for name in names:
        g = _surface(ff, name)
        print(f"{name}\t{len(g.curves)} curves\t{canonical_form(g)}")
    return 0


def cmd_belyi(args):
    if args.action == "check":
        p = parse_profile(" ".join(args.args))
        ok = check_riemann_hurwitz(p)
        print(f"{p}: Riemann-Hurwitz {'holds' if ok else 'fails'}")
        return 0 if ok else 1
    if args.action == "search":
        p = parse_profile(" ".join(args.args))
        res = realizable_as_permutation_triple(p, budget=args.budget)
        print(json.dumps(res.to_dict()))
        return 0
    if len(args.args) != 2:
        print("usage: kfv belyi poly <numerator> <denominator>", file=sys.stderr)
        return 2
    p = verify_rational_belyi(parse_poly(args.args[0]), parse_poly(args.args[1]))
    print(p)
    return 0


def cmd_jacobian(args):
    print(jacobian(parse_poly(args.f), parse_poly(args.g)))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="kfv", description="Exact checks for frameworks of curves at infinity.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run all checks on a .kfw file")
    p.add_argument("file")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("labels", help="determinant labels of a surface")
    p.add_argument("file")
    p.add_argument("surface")
    p.add_argument("--method", choices=("tree", "bareiss"), default="tree")
    p.set_defaults(func=cmd_labels)

    p = sub.add_parser("dot", help="DOT graph of a surface")
    p.add_argument("file")
    p.add_argument("surface")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("degrees", help="valuations on Z and the degree chain")
    p.add_argument("file")
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("construct", help="replay surfaces and print canonical forms")
    p.add_argument("file")
    p.add_argument("surface", nargs="?")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("belyi", help="ramification profiles and permutation triples")
    p.add_argument("action", choices=("check", "search", "poly"))
    p.add_argument("args", nargs="+")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_belyi)

    p = sub.add_parser("jacobian", help="Jacobian determinant of two polynomials")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_jacobian)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, StructuralError, GraphError, ExpressionError, FileNotFoundError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
