"""Implied-independence queries.

Three routes are available: undirected separation for concentration graphs,
d-separation for DAGs (ancestral set, moralize, separate), and the
edge-matrix criterion for regression and summary graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .edgematrix import implied_zero
from .graph import HEAD, EdgeKind, MixedGraph, Subclass, classify_subclass


class QueryError(ValueError):
    @property
    def name(self):
        return type(self).__name__


class SubclassMismatch(QueryError):
    pass


@dataclass(frozen=True)
class IndependenceQuery:
    alpha: frozenset
    beta: frozenset
    c: frozenset = frozenset()

    def __init__(self, alpha, beta, c=()):
        for name, val in (("alpha", alpha), ("beta", beta), ("c", c)):
            if isinstance(val, (str, int)):
                val = [val]
            object.__setattr__(self, name, frozenset(val))
        if not self.alpha or not self.beta:
            raise QueryError("alpha and beta must be nonempty")
        if self.alpha & self.beta or self.alpha & self.c or self.beta & self.c:
            raise QueryError("alpha, beta and c must be pairwise disjoint")

    @classmethod
    def parse(cls, text: str):
        """Parse ``"a,b | c | d,e"``; the conditioning part may be empty or absent."""
        parts = [p.strip() for p in text.split("|")]
        if len(parts) == 2:
            parts.append("")
        if len(parts) != 3:
            raise QueryError(f"query must look like 'alpha | beta | c': {text!r}")
        sets = [[x.strip() for x in p.split(",") if x.strip()] for p in parts]
        return cls(*sets)

    def __str__(self):
        def fmt(s):
            return ",".join(sorted(s))
        return f"{fmt(self.alpha)} | {fmt(self.beta)} | {fmt(self.c)}"


@dataclass(frozen=True)
class QueryVerdict:
    implied_independent: bool
    witness: Optional[tuple] = None
    argument: str = ""
    # edge-matrix route only: a nonzero block reads as an implied dependence
    implied_dependent: Optional[bool] = None


def _ids(g, q: IndependenceQuery):
    for s in (q.alpha, q.beta, q.c):
        for x in s:
            g.index(x)
    return g.indices(q.alpha), g.indices(q.beta), g.indices(q.c)


def _shortest_path(n, nbrs, sources, targets, blocked):
    """Shortest path from ``sources`` to ``targets`` avoiding ``blocked``.

    Ties are broken by the lexicographically smallest id sequence.
    """
    best = {s: (s,) for s in sources if s not in blocked}
    frontier = sorted(best)
    hits = [best[s] for s in frontier if s in targets]
    while frontier and not hits:
        nxt = {}
        for x in frontier:
            for y in nbrs[x]:
                if y in best or y in blocked:
                    continue
                cand = best[x] + (y,)
                if y not in nxt or cand < nxt[y]:
                    nxt[y] = cand
        best.update(nxt)
        frontier = sorted(nxt)
        hits = [nxt[y] for y in frontier if y in targets]
    return min(hits) if hits else None


def _undirected_separate(g, nbrs, alpha, beta, c):
    path = _shortest_path(g.n, nbrs, alpha, set(beta), set(c))
    if path is None:
        return QueryVerdict(True, None, "every path between alpha and beta meets c")
    return QueryVerdict(False, tuple(g.labels[i] for i in path),
                        "path avoiding c connects alpha and beta")


def separate_concentration(g: MixedGraph, q: IndependenceQuery) -> QueryVerdict:
    """Separation in a graph of full lines only: removing ``c`` disconnects?"""
    if any(e.kind is not EdgeKind.FULL for e in g.edges):
        raise SubclassMismatch("separate_concentration needs a full-lines-only graph")
    alpha, beta, c = _ids(g, q)
    nbrs = [g.neighbors(i) for i in range(g.n)]
    return _undirected_separate(g, nbrs, alpha, beta, c)


def moral_graph(g: MixedGraph, nodes) -> list:
    """Neighbour lists of the moral graph of the DAG induced on ``nodes``."""
    keep = set(nodes)
    nbrs = [set() for _ in range(g.n)]
    for v in keep:
        pa = [p for p in g.parents(v) if p in keep]
        for p in pa:
            nbrs[p].add(v)
            nbrs[v].add(p)
        for i, p in enumerate(pa):
            for p2 in pa[i + 1:]:
                nbrs[p].add(p2)
                nbrs[p2].add(p)
    return [sorted(s) for s in nbrs]


def d_separate(g: MixedGraph, q: IndependenceQuery, witness=True) -> QueryVerdict:
    """d-separation via the moralized ancestral set of ``alpha, beta, c``.

    The witness, when dependent, is a d-connecting path in ``g``; pass
    ``witness=False`` to skip the path search.
    """
    if classify_subclass(g) is not Subclass.DAG:
        raise SubclassMismatch("d_separate needs a graph of arrows only")
    alpha, beta, c = _ids(g, q)
    anc = g.ancestors(alpha + beta + c)
    nbrs = moral_graph(g, anc)
    verdict = _undirected_separate(g, nbrs, alpha, beta, c)
    if verdict.implied_independent:
        return QueryVerdict(True, None,
                            "c separates alpha and beta in the moral ancestral graph")
    path = connecting_path(g, alpha, beta, c) if witness else None
    return QueryVerdict(False, path, "d-connecting path")


def _open_colliders(g: MixedGraph, c) -> set:
    """Nodes where a collision does not block: ancestors of ``c`` or of a full line."""
    targets = set(c) | {x for e in g.edges if e.kind is EdgeKind.FULL for x in (e.u, e.v)}
    return g.ancestors(targets) | targets


def _steps(g: MixedGraph, i):
    """``(neighbour, mark_at_i, mark_at_neighbour)`` for every single edge at ``i``."""
    out = []
    for e in g.incident(i):
        for a, b, ma, mb in e.elementary():
            if a == i:
                out.append((b, ma, mb))
            else:
                out.append((a, mb, ma))
    return out


def connecting_path(g: MixedGraph, alpha, beta, c, max_len=None):
    """Shortest simple path connecting ``alpha`` to ``beta`` given ``c``.

    An inner node with arrowheads on both sides must be an ancestor of
    ``c`` (or of a full line); every other inner node must lie outside
    ``c``. Returns labels, or ``None`` when no such path exists. Ties are
    broken by the smallest id sequence.
    """
    cset, bset = set(c), set(beta)
    open_col = _open_colliders(g, c)
    steps = [_steps(g, i) for i in range(g.n)]
    # state: (path, mark at the last node of the last edge)
    level = [((s,), None) for s in sorted(alpha)]
    limit = max_len or g.n
    for _ in range(limit):
        nxt = []
        for path, last_mark in level:
            x = path[-1]
            for y, mx, my in steps[x]:
                if y in path:
                    continue
                if len(path) > 1:
                    collider = last_mark == HEAD and mx == HEAD
                    if collider and x not in open_col:
                        continue
                    if not collider and x in cset:
                        continue
                nxt.append((path + (y,), my))
        hits = sorted(p for p, _ in nxt if p[-1] in bset)
        if hits:
            return tuple(g.labels[i] for i in hits[0])
        level = nxt
        if not level:
            return None
    return None


def rg_separate(g: MixedGraph, q: IndependenceQuery, witness=True) -> QueryVerdict:
    """Edge-matrix criterion for regression (and summary) graphs."""
    alpha, beta, c = _ids(g, q)
    if implied_zero(g, alpha, beta, c):
        return QueryVerdict(True, None, "induced edge matrix block is zero",
                            implied_dependent=False)
    path = connecting_path(g, alpha, beta, c) if witness else None
    return QueryVerdict(False, path, "induced edge matrix block is nonzero",
                        implied_dependent=True)


def separate(g: MixedGraph, q: IndependenceQuery) -> QueryVerdict:
    """Dispatch to the most specific criterion for ``g``."""
    sub = classify_subclass(g)
    if sub is Subclass.CONCENTRATION:
        return separate_concentration(g, q)
    if sub is Subclass.DAG:
        return d_separate(g, q)
    return rg_separate(g, q)
