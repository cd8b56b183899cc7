"""Command-line interface.

Reports are ``key=value`` lines on stdout. ``--verbose`` adds a readable
summary on stderr. Exit status 1 means a domain error (``error=<Name>``),
2 a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .equivalence import markov_equivalent
from .graph import GraphError, classify_subclass
from .io import export_dot, fixture_names, load_fixture, read_document, serialize
from .oracle import NONZERO_TOL, ZERO_TOL, OracleError, batch_partial_corr, sample_system
from .separation import IndependenceQuery, QueryError, separate
from .transform import (TransformSpec, detect_conditioning_distortions,
                        detect_direct_confounding, detect_indirect_confounding,
                        format_path, induced_edges, summary_graph)


class UsageError(Exception):
    pass


def _split(text):
    return [x.strip() for x in (text or "").split(",") if x.strip()]


def _load(path):
    if os.path.exists(path):
        return read_document(path)
    if path in fixture_names():
        return load_fixture(path)
    raise FileNotFoundError(f"no such graph file or fixture: {path}")


def _compact(q: IndependenceQuery) -> str:
    return str(q).replace(" ", "")


def _render_path(g, path):
    return format_path(g, path) if path else "none"


def _cmd_validate(args, out, log):
    doc = _load(args.graph)
    g = doc.graph
    out("valid=true")
    out(f"nodes={g.n}")
    out(f"edges={len(g.edges)}")
    out(f"blocks={g.n_blocks}")
    out(f"subclass={classify_subclass(g).value}")
    failed = 0
    for k, x in enumerate(doc.expectations):
        if x.unconfirmed:
            status = "quarantined"
        else:
            ok = separate(g, x.query).implied_independent == x.independent
            status = "pass" if ok else "fail"
            failed += not ok
        out(f"expect.{k}={_compact(x.query)}:{'independent' if x.independent else 'dependent'}:{status}")
    log(f"{args.graph}: {g.n} nodes, {len(g.edges)} edges, {len(doc.expectations)} expectations, "
        f"{failed} failed")
    return 1 if failed else 0


def _answer(g, q, out, log):
    v = separate(g, q)
    out(f"query={_compact(q)}")
    out(f"independent={'true' if v.implied_independent else 'false'}")
    if not v.implied_independent:
        out(f"witness={_render_path(g, v.witness)}")
    log(f"{q}: {'implied independent' if v.implied_independent else 'not implied'} ({v.argument})")


def _cmd_query(args, out, log):
    g = _load(args.graph).graph
    if args.batch:
        with open(args.batch, encoding="utf-8") as fh:
            lines = [ln.split("#")[0].strip() for ln in fh]
        queries = [IndependenceQuery.parse(ln) for ln in lines if ln]
    elif args.query:
        queries = [IndependenceQuery.parse(args.query)]
    else:
        raise UsageError("give a query string or --batch FILE")
    for q in queries:
        _answer(g, q, out, log)
    return 0


def _fmt_pairs(pairs):
    return ";".join(sorted(",".join(sorted(p)) for p in pairs)) or "none"


def _cmd_equiv(args, out, log):
    g1, g2 = _load(args.first).graph, _load(args.second).graph
    r = markov_equivalent(g1, g2)
    out(f"equivalent={'true' if r.equivalent else 'false'}")
    out(f"skeleton_diff={_fmt_pairs(r.skeleton_diff)}")
    cols = sorted(f"{inner}:{','.join(sorted(outer))}" for inner, outer in r.collision_diff)
    out(f"collision_diff={';'.join(cols) or 'none'}")
    out(f"orders_compatible={'true' if r.orders_compatible else 'false'}")
    log("Markov equivalent" if r.equivalent else "not Markov equivalent")
    return 0


def _transform(args, marginalize, condition, out, log):
    g = _load(args.graph).graph
    t = TransformSpec(marginalize, condition)
    sg = summary_graph(g, t)
    out(f"nodes={','.join(sg.labels)}")
    for e in sorted(sg.edges):
        out(f"edge={sg.describe_edge(e)}")
    ind = induced_edges(g, sg)
    out(f"induced={len(ind)}")
    for e in ind:
        out(f"induced_edge={e}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize(sg))
    log(f"summary graph on {sg.n} nodes with {len(sg.edges)} edges, {len(ind)} new or changed")
    return 0


def _cmd_marginalize(args, out, log):
    return _transform(args, _split(args.nodes), _split(args.condition), out, log)


def _cmd_condition(args, out, log):
    return _transform(args, _split(args.marginalize), _split(args.nodes), out, log)


def _cmd_confounding(args, out, log):
    g = _load(args.graph).graph
    t = TransformSpec(_split(args.marginalize), _split(args.condition))
    sg = summary_graph(g, t)
    if not t.condition:
        direct = detect_direct_confounding(sg)
        out(f"direct={';'.join(f'{a}=>{b}' for a, b in direct) or 'none'}")
    if args.response and args.regressor:
        e = sg.edge(args.response, args.regressor)
        if e is not None and e.kind.directed and sg.labels[e.u] == args.regressor:
            paths = detect_indirect_confounding(sg, args.response, args.regressor)
            if not paths:
                out("indirect=none")
            for p in paths:
                out(f"indirect={format_path(sg, p)}")
        rep = detect_conditioning_distortions(g, t, args.response, args.regressor)
        out(f"under_conditioning={','.join(rep.under_conditioning) or 'none'}")
        over = ["-".join(p) for p in rep.over_conditioning]
        out(f"over_conditioning={';'.join(over) or 'none'}")
    log("confounding scan finished")
    return 0


def _cmd_oracle(args, out, log):
    doc = _load(args.graph)
    g = doc.graph
    if g.is_summary:
        raise OracleError("the oracle samples regression graphs only")
    sig = np.stack([sample_system(g, args.seed + r).sigma for r in range(args.reps)])
    if doc.expectations:
        queries = [x.query for x in doc.expectations]
    else:
        queries = []
        for i in range(g.n):
            for k in range(i + 1, g.n):
                rest = [g.labels[x] for x in range(g.n) if x not in (i, k)]
                queries.append(IndependenceQuery([g.labels[i]], [g.labels[k]], rest))
    failed = 0
    for q in queries:
        v = separate(g, q)
        a, b, c = g.indices(q.alpha), g.indices(q.beta), g.indices(q.c)
        worst = max(float(np.abs(batch_partial_corr(sig, x, y, c)).max()) for x in a for y in b)
        if v.implied_independent:
            ok = worst < args.tol
        else:
            ok = worst > NONZERO_TOL
        failed += not ok
        verdict = "independent" if v.implied_independent else "dependent"
        out(f"query={_compact(q)} verdict={verdict} max_abs_pcorr={worst:.3e} "
            f"result={'pass' if ok else 'fail'}")
    out(f"passed={len(queries) - failed}")
    out(f"failed={failed}")
    log(f"{len(queries)} queries over {args.reps} parameter draws, {failed} failed")
    return 1 if failed else 0


def _cmd_export(args, out, log):
    g = _load(args.graph).graph
    text = export_dot(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out(text.rstrip("\n"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reggraph", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", action="store_true", help="readable summary on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse a graph file and check its expectations")
    s.add_argument("graph")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("query", help="implied independence of alpha and beta given c")
    s.add_argument("graph")
    s.add_argument("query", nargs="?", help="'alpha | beta | c'")
    s.add_argument("--batch", help="file with one query per line")
    s.set_defaults(func=_cmd_query)

    s = sub.add_parser("equiv", help="Markov equivalence of two graphs")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=_cmd_equiv)

    s = sub.add_parser("marginalize", help="summary graph after marginalizing")
    s.add_argument("graph")
    s.add_argument("nodes")
    s.add_argument("--condition", default="")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_marginalize)

    s = sub.add_parser("condition", help="summary graph after conditioning")
    s.add_argument("graph")
    s.add_argument("nodes")
    s.add_argument("--marginalize", default="")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_condition)

    s = sub.add_parser("confounding", help="confounding and conditioning distortions")
    s.add_argument("graph")
    s.add_argument("--marginalize", default="")
    s.add_argument("--condition", default="")
    s.add_argument("--response")
    s.add_argument("--regressor")
    s.set_defaults(func=_cmd_confounding)

    s = sub.add_parser("oracle", help="check verdicts against sampled Gaussian systems")
    s.add_argument("--graph", required=True)
    s.add_argument("--reps", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=ZERO_TOL)
    s.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("export", help="Graphviz DOT rendering")
    s.add_argument("graph")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_export)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def out(line):
        print(line, file=stdout)

    def log(line):
        if args.verbose:
            print(line, file=stderr)

    try:
        return args.func(args, out, log)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (GraphError, QueryError, ValueError, FileNotFoundError) as exc:
        name = getattr(exc, "name", type(exc).__name__)
        out(f"error={name}")
        out(f"message={exc}")
        return 1


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
