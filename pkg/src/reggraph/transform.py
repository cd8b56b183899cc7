"""Summary graphs and distortion detection.

``summary_graph`` works on the directed expansion of the graph (hidden
sources for dashed lines, conditioned common responses for full lines):

1. Every node with a directed path into the conditioning set is anterior;
   among anterior nodes the edges are replaced by the moral graph of their
   directed expansion, which turns them into full lines.
2. Conditioned nodes are deleted.
3. Marginalized nodes and hidden sources are eliminated one at a time. At
   every non-collision V through the eliminated node an edge joins the
   outer nodes, keeping the endpoint mark each outer node had: two tails
   give a full line, two arrowheads a dashed line, a tail and an arrowhead
   an arrow. Collision Vs induce nothing.

An arrow and a dashed line on the same pair become a double edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import (HEAD, TAIL, Edge, EdgeKind, GraphError, MixedGraph, SummaryGraph)


class ConditioningPresent(GraphError):
    pass


class EdgeAbsent(GraphError):
    pass


@dataclass(frozen=True)
class TransformSpec:
    marginalize: frozenset = frozenset()
    condition: frozenset = frozenset()

    def __init__(self, marginalize=(), condition=()):
        if isinstance(marginalize, str):
            marginalize = [marginalize]
        if isinstance(condition, str):
            condition = [condition]
        object.__setattr__(self, "marginalize", frozenset(marginalize))
        object.__setattr__(self, "condition", frozenset(condition))
        if self.marginalize & self.condition:
            raise ValueError("marginalize and condition sets must be disjoint")

    def validate(self, g: MixedGraph):
        for x in self.marginalize | self.condition:
            g.index(x)

    @property
    def empty(self):
        return not self.marginalize and not self.condition


@dataclass
class DistortionReport:
    direct_confounding: list = field(default_factory=list)
    indirect_confounding: list = field(default_factory=list)
    under_conditioning: list = field(default_factory=list)
    over_conditioning: list = field(default_factory=list)

    @property
    def clean(self):
        return not (self.direct_confounding or self.indirect_confounding
                    or self.under_conditioning or self.over_conditioning)


def _expand(g: MixedGraph):
    """Directed expansion: parent sets, hidden-source ids, selection ids."""
    parents = [set(g.parents(i)) for i in range(g.n)]
    hidden, selected = [], []
    nxt = g.n
    for e in sorted(g.edges):
        if e.kind in (EdgeKind.DASHED, EdgeKind.DOUBLE):
            parents[e.u].add(nxt)
            parents[e.v].add(nxt)
            parents.append(set())
            hidden.append(nxt)
            nxt += 1
        if e.kind is EdgeKind.FULL:
            parents.append({e.u, e.v})
            selected.append(nxt)
            nxt += 1
    return parents, hidden, selected


def _ancestors(parents, nodes):
    seen = set()
    stack = list(nodes)
    while stack:
        x = stack.pop()
        if x not in seen:
            seen.add(x)
            stack.extend(parents[x])
    return seen


def _marginalize(marks: dict, h):
    """Eliminate ``h`` from a set of single edges ``{(u, v, mu, mv)}``."""
    inc = []
    for (u, v, mu, mv) in marks:
        if u == h:
            inc.append((v, mv, mu))
        elif v == h:
            inc.append((u, mu, mv))
    out = {e for e in marks if h not in (e[0], e[1])}
    for (i, mi, hi), (k, mk, hk) in itertools.combinations(sorted(inc), 2):
        if i == k or (hi == HEAD and hk == HEAD):
            continue
        out.add(_norm(i, k, mi, mk))
    return out


def _norm(u, v, mu, mv):
    return (u, v, mu, mv) if u < v else (v, u, mv, mu)


def _to_edges(marks):
    kinds = {}
    for (u, v, mu, mv) in marks:
        if mu == TAIL and mv == TAIL:
            kinds.setdefault((u, v), set()).add(("full", u, v))
        elif mu == HEAD and mv == HEAD:
            kinds.setdefault((u, v), set()).add(("dashed", u, v))
        elif mu == TAIL:
            kinds.setdefault((u, v), set()).add(("arrow", u, v))
        else:
            kinds.setdefault((u, v), set()).add(("arrow", v, u))
    edges = []
    for (u, v), ks in sorted(kinds.items()):
        names = {k[0] for k in ks}
        arrows = [k for k in ks if k[0] == "arrow"]
        if names == {"full"}:
            edges.append(Edge(EdgeKind.FULL, u, v))
        elif names == {"dashed"}:
            edges.append(Edge(EdgeKind.DASHED, u, v))
        elif names == {"arrow"} and len(arrows) == 1:
            edges.append(Edge(EdgeKind.ARROW, arrows[0][1], arrows[0][2]))
        elif names == {"arrow", "dashed"} and len(arrows) == 1:
            edges.append(Edge(EdgeKind.DOUBLE, arrows[0][1], arrows[0][2]))
        else:
            raise AssertionError(f"unexpected edge combination {sorted(ks)}")
    return edges


def summary_graph(g: MixedGraph, t: TransformSpec, hidden_order=None) -> SummaryGraph:
    """Graph over the remaining nodes after marginalizing and conditioning.

    ``hidden_order`` optionally permutes the elimination order of
    marginalized nodes; the result does not depend on it.
    """
    t.validate(g)
    mids = g.indices(t.marginalize)
    cids = g.indices(t.condition)
    parents, hidden, selected = _expand(g)
    size = len(parents)
    conditioned = set(cids) | set(selected)
    anterior = _ancestors(parents, conditioned)

    marks = set()
    for v in range(size):
        for p in parents[v]:
            if v in anterior:
                marks.add(_norm(p, v, TAIL, TAIL))
            else:
                marks.add(_norm(p, v, TAIL, HEAD))
        if v in anterior:
            for p, q in itertools.combinations(sorted(parents[v]), 2):
                marks.add(_norm(p, q, TAIL, TAIL))
    marks = {e for e in marks if e[0] not in conditioned and e[1] not in conditioned}
    order = sorted(mids) + hidden
    if hidden_order is not None:
        order = [g.index(x) for x in hidden_order] + hidden
        if sorted(order) != sorted(mids + hidden):
            raise ValueError("hidden_order must be a permutation of the marginalized nodes")
    for h in order:
        marks = _marginalize(marks, h)

    keep = [i for i in range(g.n) if i not in set(mids) | set(cids)]
    new_id = {old: k for k, old in enumerate(keep)}
    edges = [Edge(e.kind, new_id[e.u], new_id[e.v]) for e in _to_edges(marks)]
    used_blocks = sorted({g.block_of[i] for i in keep})
    renum = {b: k for k, b in enumerate(used_blocks)}
    has_context = bool(g.context_block is not None and
                       any(g.block_of[i] == g.context_block for i in keep))
    return SummaryGraph([g.labels[i] for i in keep],
                        [renum[g.block_of[i]] for i in keep], edges,
                        [g.node_types[i] for i in keep], transform=t,
                        has_context=has_context)


def induced_edges(g: MixedGraph, sg: MixedGraph) -> list:
    """Edges of ``sg`` that are not edges of ``g`` with the same kind and direction."""
    out = []
    for e in sorted(sg.edges):
        a, b = sg.labels[e.u], sg.labels[e.v]
        orig = g.edge(a, b)
        same = orig is not None and orig.kind == e.kind and \
            (g.labels[orig.u], g.labels[orig.v]) == (a, b)
        if not same:
            out.append(sg.describe_edge(e))
    return out


def detect_direct_confounding(sg: MixedGraph) -> list:
    """Double edges of a summary graph obtained by marginalizing only.

    Returns ``(regressor, response)`` label pairs.
    """
    if sg.transform is not None and sg.transform.condition:
        raise ConditioningPresent(
            "direct confounding is only read off graphs obtained by marginalizing")
    return [(sg.labels[e.u], sg.labels[e.v]) for e in sg.edges_of_kind(EdgeKind.DOUBLE)]


def _has_dashed(e: Edge) -> bool:
    return e.kind in (EdgeKind.DASHED, EdgeKind.DOUBLE)


def detect_indirect_confounding(sg: MixedGraph, response, regressor) -> list:
    """Paths ``Y -- o -- ... -- o -- T`` or ``Y -- o ... o <- T`` through intermediates.

    Every inner node must sit in a block strictly between those of the
    response ``Y`` and the regressor ``T``. Paths are returned as label
    tuples.
    """
    y, tt = sg.index(response), sg.index(regressor)
    e = sg.edge(y, tt)
    if e is None or not e.kind.directed or e.u != tt:
        raise EdgeAbsent(f"no arrow {sg.labels[tt]} -> {sg.labels[y]}")
    lo, hi = sg.block_of[y], sg.block_of[tt]

    def intermediate(v):
        return lo < sg.block_of[v] < hi

    paths = []

    def extend(path):
        x = path[-1]
        for f in sorted(sg.incident(x), key=lambda f: f.other(x)):
            z = f.other(x)
            if z in path:
                continue
            if z == tt:
                if len(path) > 1 and (_has_dashed(f) or (f.kind.directed and f.u == tt)):
                    paths.append(tuple(path + [z]))
                continue
            if _has_dashed(f) and intermediate(z):
                extend(path + [z])

    extend([y])
    return [tuple(sg.labels[i] for i in p) for p in sorted(paths)]


def format_path(g: MixedGraph, path) -> str:
    """Render a label path with edge symbols: ``-`` dashed, ``--`` full,
    ``->``/``<-`` arrows, ``=>``/``<=`` double edges."""
    out = [path[0]]
    for a, b in zip(path, path[1:]):
        e = g.edge(a, b)
        ia = g.index(a)
        if e.kind is EdgeKind.DASHED:
            sym = "-"
        elif e.kind is EdgeKind.FULL:
            sym = "--"
        elif e.kind is EdgeKind.ARROW:
            sym = "->" if e.u == ia else "<-"
        else:
            sym = "=>" if e.u == ia else "<="
        out += [sym, b]
    return "".join(out)


def _directed_paths(g: MixedGraph, src, dst):
    out = []

    def walk(path):
        x = path[-1]
        if x == dst:
            out.append(tuple(path))
            return
        for ch in g.children(x):
            if ch not in path:
                walk(path + [ch])

    walk([src])
    return out


def detect_conditioning_distortions(g: MixedGraph, t: TransformSpec, response,
                                    regressor) -> DistortionReport:
    """Under- and over-conditioning for the dependence of ``response`` on ``regressor``.

    Under-conditioning: a marginalized node is intermediate on a directed
    path ``regressor -> ... -> response``. Over-conditioning: a path between
    the two whose inner nodes are all transformed, with every conditioned
    inner node a collision node, every marginalized collision node an
    ancestor of a conditioned node, every other marginalized node
    transmitting, and at least one conditioned node.
    """
    t.validate(g)
    rep = DistortionReport()
    if t.empty:
        return rep
    y, x = g.index(response), g.index(regressor)
    mids, cids = set(g.indices(t.marginalize)), set(g.indices(t.condition))
    under = set()
    for p in _directed_paths(g, x, y):
        under |= {v for v in p[1:-1] if v in mids}
    rep.under_conditioning = sorted(g.labels[v] for v in under)

    anc_c = g.ancestors(cids)
    from .separation import _steps
    steps = [_steps(g, i) for i in range(g.n)]
    found = []

    def walk(path, last_mark):
        node = path[-1]
        for z, mx, mz in steps[node]:
            if z in path:
                continue
            if len(path) > 1:
                collider = last_mark == HEAD and mx == HEAD
                if node in cids and not collider:
                    continue
                if node in mids and collider and node not in anc_c:
                    continue
            if z == y:
                if len(path) > 1 and any(v in cids for v in path[1:]):
                    found.append(tuple(path + [z]))
                continue
            if z in mids or z in cids:
                walk(path + [z], mz)

    walk([x], None)
    rep.over_conditioning = sorted({tuple(g.labels[v] for v in p) for p in found})
    return rep


def distortion_report(g: MixedGraph, t: TransformSpec, response, regressor) -> DistortionReport:
    """All four distortion kinds for one response-regressor pair."""
    rep = detect_conditioning_distortions(g, t, response, regressor)
    sg = summary_graph(g, t)
    if not t.condition:
        rep.direct_confounding = detect_direct_confounding(sg)
    e = sg.edge(response, regressor) if response in sg.labels and regressor in sg.labels else None
    if e is not None and e.kind.directed and sg.labels[e.u] == regressor:
        rep.indirect_confounding = detect_indirect_confounding(sg, response, regressor)
    return rep
