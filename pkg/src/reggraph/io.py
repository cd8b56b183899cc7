"""Text format, DOT export and shipped fixtures.

Grammar, one statement per line, ``#`` starts a comment::

    graph regression|summary
    node <label> block=<k>|context [type=continuous|discrete]
    edge <a> -> <b>
    edge <a> -- <b> [kind=dashed|full|double]
    expect <alpha> | <beta> | <c> independent|dependent

For ``kind=double`` the regressor is written first. Without ``kind`` a
line is full inside the context and dashed elsewhere. A trailing
``# UNCONFIRMED`` comment marks an edge or expectation as uncertain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .graph import (BlockOrder, Edge, EdgeKind, GraphError, MixedGraph, SummaryGraph,
                    UnknownNode, build_graph)
from .separation import IndependenceQuery

_FORBIDDEN = set("|,=#")


class GraphSyntaxError(GraphError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Expectation:
    query: IndependenceQuery
    independent: bool
    unconfirmed: bool = False
    line: int = 0


@dataclass
class GraphDocument:
    graph: MixedGraph
    expectations: list = field(default_factory=list)
    unconfirmed_edges: list = field(default_factory=list)


def _tokens(line):
    """Whitespace-separated tokens with their 1-based columns."""
    out, col = [], 0
    while col < len(line):
        if line[col].isspace():
            col += 1
            continue
        start = col
        while col < len(line) and not line[col].isspace():
            col += 1
        out.append((line[start:col], start + 1))
    return out


def _label(tok, ln):
    text, col = tok
    bad = [ch for ch in text if ch in _FORBIDDEN]
    if bad:
        raise GraphSyntaxError(f"invalid character {bad[0]!r} in label {text!r}", ln, col)
    return text


def _option(tok, ln, allowed):
    text, col = tok
    key, sep, val = text.partition("=")
    if not sep or key not in allowed:
        raise GraphSyntaxError(f"unexpected token {text!r}", ln, col)
    if allowed[key] is not None and val not in allowed[key]:
        raise GraphSyntaxError(f"bad value {val!r} for {key}", ln, col + len(key) + 1)
    return key, val


def parse_document(text: str) -> GraphDocument:
    mode = None
    nodes, blocks, types = [], {}, {}
    edge_specs, expects, unconfirmed = [], [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        flagged = "UNCONFIRMED" in comment
        toks = _tokens(body)
        if not toks:
            continue
        head, col = toks[0]
        if head == "graph":
            if len(toks) != 2 or toks[1][0] not in ("regression", "summary"):
                raise GraphSyntaxError("expected 'graph regression' or 'graph summary'", ln,
                                       toks[1][1] if len(toks) > 1 else col + 5)
            if mode is not None or nodes or edge_specs:
                raise GraphSyntaxError("graph header must come first", ln, col)
            mode = toks[1][0]
        elif head == "node":
            if len(toks) < 3:
                raise GraphSyntaxError("expected 'node <label> block=<k>|context'", ln, col)
            lab = _label(toks[1], ln)
            if lab in blocks:
                raise GraphSyntaxError(f"node {lab!r} declared twice", ln, toks[1][1])
            opts = {}
            for tok in toks[2:]:
                k, v = _option(tok, ln, {"block": None, "type": ("continuous", "discrete")})
                if k in opts:
                    raise GraphSyntaxError(f"repeated option {k!r}", ln, tok[1])
                if k == "block" and v != "context" and not v.isdigit():
                    raise GraphSyntaxError(f"bad block {v!r}", ln, tok[1] + 6)
                opts[k] = v
            if "block" not in opts:
                raise GraphSyntaxError("missing block=", ln, col)
            nodes.append(lab)
            blocks[lab] = opts["block"] if opts["block"] == "context" else str(int(opts["block"]))
            types[lab] = opts.get("type", "continuous")
        elif head == "edge":
            if len(toks) not in (4, 5):
                raise GraphSyntaxError("expected 'edge <a> -> <b>' or 'edge <a> -- <b>'", ln, col)
            a, b = _label(toks[1], ln), _label(toks[3], ln)
            sym, scol = toks[2]
            if sym == "->":
                if len(toks) == 5:
                    raise GraphSyntaxError("arrows take no options", ln, toks[4][1])
                kind = EdgeKind.ARROW
            elif sym == "--":
                kind = None
                if len(toks) == 5:
                    _, v = _option(toks[4], ln, {"kind": ("dashed", "full", "double")})
                    kind = EdgeKind(v)
            else:
                raise GraphSyntaxError(f"unknown edge symbol {sym!r}", ln, scol)
            edge_specs.append((kind, a, b, ln, toks[1][1]))
            if flagged:
                unconfirmed.append((a, b))
        elif head == "expect":
            rest = body[body.index("expect") + len("expect"):]
            verdict = rest.split()[-1] if rest.split() else ""
            if verdict not in ("independent", "dependent"):
                raise GraphSyntaxError("expectation must end in independent|dependent", ln, col)
            qtext = rest[:rest.rindex(verdict)]
            try:
                q = IndependenceQuery.parse(qtext)
            except ValueError as exc:
                raise GraphSyntaxError(str(exc), ln, col + 7) from None
            expects.append(Expectation(q, verdict == "independent", flagged, ln))
        else:
            raise GraphSyntaxError(f"unknown keyword {head!r}", ln, col)

    for kind, a, b, ln, col in edge_specs:
        for x in (a, b):
            if x not in blocks:
                raise UnknownNode(f"line {ln}: edge endpoint {x!r} is not a declared node")
    ctx = [lab for lab in nodes if blocks[lab] == "context"]
    numbered = sorted({int(v) for v in blocks.values() if v != "context"})
    resolved = []
    for kind, a, b, ln, col in edge_specs:
        if kind is None:
            both_ctx = blocks[a] == "context" and blocks[b] == "context"
            kind = EdgeKind.FULL if both_ctx else EdgeKind.DASHED
        resolved.append((kind, a, b))
    type_list = [types[lab] for lab in nodes]
    if mode == "summary":
        pos = {k: j for j, k in enumerate(numbered)}
        block_of = [len(numbered) if blocks[lab] == "context" else pos[int(blocks[lab])]
                    for lab in nodes]
        index = {lab: i for i, lab in enumerate(nodes)}
        edges = []
        for kind, a, b in resolved:
            edges.append(Edge(kind, index[a], index[b]))
        g = SummaryGraph(nodes, block_of, edges, type_list, has_context=bool(ctx))
    else:
        order = BlockOrder([[lab for lab in nodes if blocks[lab] == str(k)] for k in numbered],
                           ctx)
        g = build_graph(nodes, order, resolved, type_list)
    for e in expects:
        for x in e.query.alpha | e.query.beta | e.query.c:
            g.index(x)
    return GraphDocument(g, expects, unconfirmed)


def parse_graph(text: str) -> MixedGraph:
    return parse_document(text).graph


def _edge_line(g: MixedGraph, e: Edge) -> str:
    a, b = g.labels[e.u], g.labels[e.v]
    if e.kind is EdgeKind.ARROW:
        return f"edge {a} -> {b}"
    return f"edge {a} -- {b} kind={e.kind.value}"


def serialize(g: MixedGraph, expectations=()) -> str:
    lines = [f"graph {'summary' if g.is_summary else 'regression'}"]
    for i, lab in enumerate(g.labels):
        blk = "context" if g.block_of[i] == g.context_block else str(g.block_of[i])
        extra = " type=discrete" if g.node_types[i] == "discrete" else ""
        lines.append(f"node {lab} block={blk}{extra}")
    for e in sorted(g.edges, key=lambda e: (e.u, e.v, e.kind.value)):
        lines.append(_edge_line(g, e))
    for x in expectations:
        verdict = "independent" if x.independent else "dependent"
        lines.append(f"expect {x.query} {verdict}")
    return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: MixedGraph) -> str:
    """Graphviz rendering; discrete variables are filled dots, continuous ones circles."""
    out = ["digraph G {", "  rankdir=RL;", "  node [shape=circle];"]
    for b, members in enumerate(g.blocks()):
        if not members:
            continue
        name = "context" if b == g.context_block else f"block {b}"
        out.append(f"  subgraph cluster_{b} {{")
        out.append(f"    label={_q(name)};")
        for i in members:
            style = " [style=filled, fillcolor=black, fontcolor=white]" \
                if g.node_types[i] == "discrete" else ""
            out.append(f"    {_q(g.labels[i])}{style};")
        out.append("  }")
    for e in sorted(g.edges, key=lambda e: (e.u, e.v, e.kind.value)):
        a, b = _q(g.labels[e.u]), _q(g.labels[e.v])
        if e.kind in (EdgeKind.ARROW, EdgeKind.DOUBLE):
            out.append(f"  {a} -> {b};")
        if e.kind in (EdgeKind.DASHED, EdgeKind.DOUBLE):
            out.append(f"  {a} -> {b} [dir=none, style=dashed];")
        if e.kind is EdgeKind.FULL:
            out.append(f"  {a} -> {b} [dir=none, style=solid];")
    out.append("}")
    return "\n".join(out) + "\n"


def fixture_names() -> list:
    root = resources.files("reggraph") / "fixtures"
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".rg"))


def fixture_text(name: str) -> str:
    path = resources.files("reggraph") / "fixtures" / f"{name}.rg"
    if not path.is_file():
        raise FileNotFoundError(f"no fixture named {name!r}")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str) -> GraphDocument:
    return parse_document(fixture_text(name))


def read_document(path) -> GraphDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
