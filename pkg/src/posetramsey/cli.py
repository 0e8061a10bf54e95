"""Command-line front end.

Exit codes: 0 success, 2 cap or budget exceeded, 3 verification failure,
4 parse or usage error.
"""

import argparse
import json
import sys

from . import constructions as cons
from .combinatorics import known_bounds
from .embed import dim2
from .errors import (ArityError, BudgetExceeded, CapExceeded, FormatError, ParseError,
                     PosetRamseyError, UnknownPattern)
from .lattice import read_coloring, write_coloring
from .poset_core import ColoredPoset, build, classify, height, is_series_parallel, width
from .search import DecisionProblem, decide, eh_scan, ramsey_scan

EXIT_OK, EXIT_CAP, EXIT_VERIFY, EXIT_PARSE = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, text_lines, payload):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _plain(p):
    return p.poset if isinstance(p, ColoredPoset) else p


def _cert_line(cert):
    if cert.exhausted:
        return cert.unsat_line()
    return f"SAT N={cert.N} nodes={cert.nodes} classes={cert.classes} ms={int(round(cert.ms))}"


def _cert_json(cert):
    return {"N": cert.N, "sat": cert.satisfiable, "nodes": cert.nodes,
            "classes": cert.classes, "ms": round(cert.ms, 3)}


def cmd_info(args):
    p = build(args.expr)
    q = _plain(p)
    cl = classify(q)
    if cl.kind == "trivial":
        kind = "trivial([" + ",".join(map(str, cl.chains)) + "])"
    else:
        kind = f"nontrivial({cl.shape} at {list(cl.witness)})"
    d, _ = dim2(q)
    info = {"vertices": q.n, "height": height(q), "width": width(q), "dim2": d,
            "class": kind, "series_parallel": is_series_parallel(q)}
    if isinstance(p, ColoredPoset):
        info["colors"] = p.colors
    lines = [f"{k} {v}" for k, v in info.items()]
    _emit(args, lines, info)
    return EXIT_OK


def cmd_ramsey(args):
    P, Q = build(args.P), build(args.Q)
    certs = ramsey_scan("weak" if args.weak else "induced", P, Q, max_N=args.max_n,
                        budget_ms=args.budget, symmetry=not args.no_symmetry,
                        threads=args.threads)
    value = certs[-1].N
    _emit(args, [_cert_line(c) for c in certs] + [str(value)],
          {"value": value, "certificates": [_cert_json(c) for c in certs]})
    return EXIT_OK


def cmd_decide(args):
    P, Q = build(args.P), build(args.Q)
    prob = DecisionProblem("weak" if args.weak else "induced", P, Q, args.N,
                           budget_ms=args.budget, symmetry=not args.no_symmetry)
    cert = decide(prob, threads=args.threads)
    if cert.satisfiable and args.emit:
        write_coloring(args.emit, cert.witness)
    _emit(args, [_cert_line(cert)], _cert_json(cert))
    return EXIT_OK


def cmd_eh(args):
    P = build(args.expr)
    if not isinstance(P, ColoredPoset):
        raise ParseError("eh needs a colored pattern")
    certs = eh_scan(P, args.n, max_N=args.max_n, budget_ms=args.budget,
                    symmetry=not args.no_symmetry, threads=args.threads)
    value = certs[-1].N
    _emit(args, [_cert_line(c) for c in certs] + [str(value)],
          {"value": value, "certificates": [_cert_json(c) for c in certs]})
    return EXIT_OK


def _mask_list(text):
    text = text.strip()
    if not text or text == "-":
        return []
    try:
        return [int(t, 16) for t in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad mask list {text!r}") from exc


def _int_params(name, params, count):
    if len(params) != count:
        raise ParseError(f"{name} takes {count} parameter(s)")
    try:
        return [int(x) for x in params]
    except ValueError as exc:
        raise ParseError(f"{name} takes integer parameters") from exc


def cmd_construct(args):
    name, params = args.name, args.params
    if name == "two_chain":
        c = cons.two_chain_coloring(*_int_params(name, params, 1))
    elif name == "antichain_layered":
        c = cons.antichain_layered(*_int_params(name, params, 2))
    elif name == "cc":
        c = cons.cc_layered(*_int_params(name, params, 2))
    elif name == "ccc":
        c = cons.ccc_layered(*_int_params(name, params, 2))
    elif name == "dn":
        c = cons.dn_lower(*_int_params(name, params, 1))
    elif name == "vn":
        c = cons.vn_lower(*_int_params(name, params, 1))
    elif name == "eh_chain":
        if len(params) != 4:
            raise ParseError("eh_chain takes N n S T (S, T as comma-separated hex masks)")
        N, n = _int_params(name, params[:2], 2)
        c = cons.eh_chain_coloring(N, n, _mask_list(params[2]), _mask_list(params[3]))
    elif name == "shrub_forest":
        if args.seed is None:
            raise ParseError("shrub_forest needs --seed")
        N, k = _int_params(name, params, 2)
        c = cons.shrub_forest_sample(N, k, args.seed)
        if isinstance(c, cons.SampleFailure):
            _emit(args, [f"sample failed: {c.reason} after {c.attempts} attempts"],
                  {"ok": False, "reason": c.reason, "attempts": c.attempts})
            return EXIT_VERIFY
    else:
        raise ParseError(f"unknown construction {name!r}")
    write_coloring(args.output, c)
    _emit(args, [f"wrote {args.output} dim {c.dim}"], {"ok": True, "dim": c.dim, "path": args.output})
    return EXIT_OK


def cmd_verify(args):
    c = read_coloring(args.file)
    forbid = []
    if args.no_blue:
        forbid.append((_plain(build(args.no_blue)), "weak" if args.weak else "induced", "b"))
    if args.no_red:
        forbid.append((_plain(build(args.no_red)), "weak" if args.weak else "induced", "r"))
    if args.no_colored:
        cp = build(args.no_colored)
        if not isinstance(cp, ColoredPoset):
            raise ParseError("--no-colored needs a colored pattern")
        forbid.append((cp, "colored", None))
    if not forbid:
        raise UsageError("verify needs at least one of --no-blue, --no-red, --no-colored")
    report = cons.verify_coloring(c, forbid)
    labels = [x for x in (args.no_blue and f"blue {args.no_blue}",
                          args.no_red and f"red {args.no_red}",
                          args.no_colored and f"colored {args.no_colored}") if x]
    lines, items = [], []
    for label, (_, _, emb) in zip(labels, report.checks):
        if emb is None:
            lines.append(f"ok   no {label}")
        else:
            lines.append(f"FAIL {label} at " + " ".join(format(m, "x") for m in emb.map))
        items.append({"check": label, "ok": emb is None,
                      "copy": None if emb is None else [format(m, "x") for m in emb.map]})
    _emit(args, lines, {"ok": report.ok, "checks": items})
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_bounds(args):
    rec = known_bounds(args.P, args.n)
    if rec["lower"] == rec["upper"]:
        val = str(rec["lower"])
    else:
        val = f"[{rec['lower']}, {rec['upper']}]"
    flag = "exact" if rec["exact"] else "bounds"
    line = f"{args.P}\t{args.n}\t{rec['lower']}\t{rec['upper']}\t{rec['source']}"
    lines = ["pattern\tn\tlower\tupper\tsource", line, f"value {val} ({flag})"]
    if rec["note"]:
        lines.append(f"note {rec['note']}")
    _emit(args, lines, dict(rec, pattern=args.P, n=args.n))
    return EXIT_OK


def make_parser():
    # global options may appear before or after the subcommand; the
    # subcommand copies suppress their defaults so they do not clobber
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    ap = _Parser(prog="posetramsey", description="Poset Ramsey numbers on Boolean lattices")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="basic parameters of a poset expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_info)

    def search_opts(p):
        p.add_argument("--budget", type=float, default=None, metavar="MS")
        p.add_argument("--no-symmetry", action="store_true")

    p = sub.add_parser("ramsey", parents=[common], help="compute R(P, Q) or R^w(P, Q)")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("--weak", action="store_true")
    p.add_argument("--max-n", type=int, default=6)
    search_opts(p)
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("decide", parents=[common], help="decide one host dimension")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("N", type=int)
    p.add_argument("--weak", action="store_true")
    p.add_argument("--emit", metavar="FILE")
    search_opts(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("eh", parents=[common], help="Erdos-Hajnal number of a colored pattern")
    p.add_argument("expr")
    p.add_argument("n", type=int)
    p.add_argument("--max-n", type=int, default=6)
    search_opts(p)
    p.set_defaults(func=cmd_eh)

    p = sub.add_parser("construct", parents=[common], help="write a lower-bound coloring")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check a coloring file")
    p.add_argument("file")
    p.add_argument("--no-blue")
    p.add_argument("--no-red")
    p.add_argument("--no-colored")
    p.add_argument("--weak", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="known bounds for R(P, Q_n)")
    p.add_argument("P")
    p.add_argument("n", help="integer, or 'diag' for R(P, P)")
    p.set_defaults(func=cmd_bounds)
    return ap


def run(argv=None):
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CapExceeded, BudgetExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, ArityError, FormatError, UnknownPattern) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PosetRamseyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
