"""Edge-matrix indicator calculus.

An edge matrix has ones on the diagonal and a one at ``(i, k)`` when ``k``
is an explanatory variable for ``i`` (rows are responses). Induced edge
matrices are obtained with the boolean analogue of the linear algebra that
turns a triangular generating system into least-squares coefficients: every
subtraction becomes an addition and every nonzero is capped at one.

Dashed and full lines are first expanded into a directed system: a dashed
line ``i -- k`` becomes a hidden common source ``h -> i, h -> k``, and a full
line ``i == k`` a common response ``i -> s <- k`` that is always conditioned
on. On that directed system, with ``a`` the regressed-on-nothing side
(``alpha``, ``m`` and the hidden sources) and ``b`` the regressors (``beta``,
``c`` and the common responses),

    Z     = closure of the edge matrix over ``a``
    K     = connected closure of ``I + Z_ba Z_ba'`` on ``b``
    P_a|b = In[Z_ab + Z_aa Z_ba' K Z_bb]

and ``P_alpha|beta.c`` is the ``alpha x beta`` block of ``P_a|b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import EdgeKind, MixedGraph, RegressionGraph, SummaryGraph


@dataclass(frozen=True)
class EdgeMatrix:
    """Edge matrix with nodes ordered future to past.

    ``arrows[i, k] = 1`` for ``k -> i``; ``dashed`` and ``full`` are
    symmetric. ``matrix`` is their union with a unit diagonal.
    """

    labels: tuple
    block_of: tuple
    arrows: np.ndarray
    dashed: np.ndarray
    full: np.ndarray

    @property
    def dim(self):
        return len(self.labels)

    @property
    def matrix(self) -> np.ndarray:
        m = self.arrows | self.dashed | self.full
        m = m.copy()
        np.fill_diagonal(m, 1)
        return m

    def to_graph(self, summary=False, has_context=True, node_types=None):
        """Rebuild the graph encoded by this matrix."""
        edges = []
        n = self.dim
        for i in range(n):
            for k in range(n):
                if i == k:
                    continue
                if self.arrows[i, k]:
                    kind = EdgeKind.DOUBLE if self.dashed[i, k] else EdgeKind.ARROW
                    edges.append((kind, self.labels[k], self.labels[i]))
                elif i < k and self.dashed[i, k] and not self.arrows[k, i]:
                    edges.append((EdgeKind.DASHED, self.labels[i], self.labels[k]))
                elif i < k and self.full[i, k]:
                    edges.append((EdgeKind.FULL, self.labels[i], self.labels[k]))
        from .graph import Edge
        idx = {lab: j for j, lab in enumerate(self.labels)}
        resolved = [Edge(kind, idx[a], idx[b]) for kind, a, b in edges]
        cls = SummaryGraph if summary else RegressionGraph
        return cls(self.labels, self.block_of, resolved, node_types,
                   has_context=has_context)

    def __str__(self):
        return format_matrix(self.matrix, self.labels, self.labels)


@dataclass(frozen=True)
class NodePartition:
    alpha: frozenset
    beta: frozenset
    c: frozenset
    m: frozenset

    @classmethod
    def from_query(cls, g: MixedGraph, alpha, beta, c=()):
        """Partition with ``m`` holding every node not named in the query."""
        a, b, cc = (frozenset(_labels(g, x)) for x in (alpha, beta, c))
        rest = frozenset(g.labels) - a - b - cc
        return cls(a, b, cc, rest)

    def validate(self, g: MixedGraph):
        parts = [self.alpha, self.beta, self.c, self.m]
        union = frozenset().union(*parts)
        if sum(len(p) for p in parts) != len(union) or union != frozenset(g.labels):
            raise ValueError("alpha, beta, c, m must partition the node set")
        if not self.alpha or not self.beta:
            raise ValueError("alpha and beta must be nonempty")


@dataclass(frozen=True)
class InducedMatrix:
    """Structural-zero pattern of the coefficient matrix of ``a`` on ``b``."""

    rows: tuple
    cols: tuple
    entries: np.ndarray

    def block(self, alpha, beta) -> np.ndarray:
        ri = [self.rows.index(x) for x in sorted(alpha, key=self.rows.index)]
        ci = [self.cols.index(x) for x in sorted(beta, key=self.cols.index)]
        return self.entries[np.ix_(ri, ci)]

    def __str__(self):
        return format_matrix(self.entries, self.rows, self.cols)


def format_matrix(m, rows, cols) -> str:
    width = max([len(str(x)) for x in list(rows) + list(cols)] + [1])
    head = " " * (width + 1) + " ".join(str(c).rjust(width) for c in cols)
    lines = [head]
    for lab, row in zip(rows, m):
        lines.append(str(lab).rjust(width) + " " +
                     " ".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(lines)


def _labels(g, nodes):
    if isinstance(nodes, (str, int)):
        nodes = [nodes]
    return [g.labels[g.index(x)] for x in nodes]


def to_edge_matrix(g: MixedGraph) -> EdgeMatrix:
    order = sorted(range(g.n), key=lambda i: (g.block_of[i], i))
    pos = {v: p for p, v in enumerate(order)}
    n = g.n
    arrows = np.zeros((n, n), dtype=np.uint8)
    dashed = np.zeros((n, n), dtype=np.uint8)
    full = np.zeros((n, n), dtype=np.uint8)
    for e in g.edges:
        u, v = pos[e.u], pos[e.v]
        if e.kind in (EdgeKind.ARROW, EdgeKind.DOUBLE):
            arrows[v, u] = 1
        if e.kind in (EdgeKind.DASHED, EdgeKind.DOUBLE):
            dashed[u, v] = dashed[v, u] = 1
        if e.kind is EdgeKind.FULL:
            full[u, v] = full[v, u] = 1
    return EdgeMatrix(tuple(g.labels[i] for i in order),
                      tuple(g.block_of[i] for i in order), arrows, dashed, full)


def _to_bits(m) -> list:
    m = np.asarray(m)
    n = m.shape[1]
    out = []
    for row in m:
        acc = 0
        for k in range(n):
            if row[k]:
                acc |= 1 << k
        out.append(acc)
    return out


def _from_bits(rows, ncols) -> np.ndarray:
    out = np.zeros((len(rows), ncols), dtype=np.uint8)
    for i, r in enumerate(rows):
        for k in range(ncols):
            if (r >> k) & 1:
                out[i, k] = 1
    return out


def _mask(idx) -> int:
    acc = 0
    for i in idx:
        acc |= 1 << i
    return acc


def indicator_closure(m, over) -> np.ndarray:
    """Add ``(i, k)`` whenever a path ``i ... k`` has all inner nodes in ``over``.

    ``m`` is a square 0/1 array; ``over`` holds row/column positions.
    Idempotent, monotone, and closing over ``s`` then ``t`` equals closing
    over their union.
    """
    m = np.asarray(m)
    rows = kernels.closure(_to_bits(m), _mask(over))
    return _from_bits(rows, m.shape[1])


class CanonicalSystem:
    """Directed expansion of a mixed graph used by the indicator calculus.

    Ids ``0..n-1`` are the graph's nodes; hidden sources for dashed lines
    and conditioned common responses for full lines follow.
    """

    def __init__(self, g: MixedGraph):
        self.n = g.n
        parents = [set() for _ in range(g.n)]
        self.hidden = []
        self.selected = []
        extra_parents = []
        nxt = g.n
        for e in sorted(g.edges):
            if e.kind in (EdgeKind.ARROW, EdgeKind.DOUBLE):
                parents[e.v].add(e.u)
            if e.kind in (EdgeKind.DASHED, EdgeKind.DOUBLE):
                parents[e.u].add(nxt)
                parents[e.v].add(nxt)
                extra_parents.append(set())
                self.hidden.append(nxt)
                nxt += 1
            if e.kind is EdgeKind.FULL:
                extra_parents.append({e.u, e.v})
                self.selected.append(nxt)
                nxt += 1
        self.size = nxt
        self.parents = parents + extra_parents
        self.rows = [_mask(p) | (1 << i) for i, p in enumerate(self.parents)]
        self.hidden_mask = _mask(self.hidden)
        self.selected_mask = _mask(self.selected)


def canonical_system(g: MixedGraph) -> CanonicalSystem:
    cs = g.__dict__.get("_canonical")
    if cs is None:
        cs = CanonicalSystem(g)
        g.__dict__["_canonical"] = cs
    return cs


def _induced_rows(cs: CanonicalSystem, rows_idx, amask, bmask):
    """Rows ``rows_idx`` of the induced matrix as bitsets over the full index space."""
    return kernels.induced_rows(cs.rows, list(rows_idx), amask, bmask)


def _query_masks(g, cs, alpha, beta, c, m):
    amask = _mask(alpha) | _mask(m) | cs.hidden_mask
    bmask = _mask(beta) | _mask(c) | cs.selected_mask
    return amask, bmask


def induced_edge_matrix(g: MixedGraph, p: NodePartition) -> InducedMatrix:
    p.validate(g)
    cs = canonical_system(g)
    ids = {k: g.indices(getattr(p, k)) for k in ("alpha", "beta", "c", "m")}
    amask, bmask = _query_masks(g, cs, ids["alpha"], ids["beta"], ids["c"], ids["m"])
    row_ids = ids["alpha"] + ids["m"]
    col_ids = ids["beta"] + ids["c"]
    rows = _induced_rows(cs, row_ids, amask, bmask)
    entries = np.zeros((len(row_ids), len(col_ids)), dtype=np.uint8)
    for r, bits in enumerate(rows):
        for q, j in enumerate(col_ids):
            entries[r, q] = (bits >> j) & 1
    return InducedMatrix(tuple(g.labels[i] for i in row_ids),
                         tuple(g.labels[j] for j in col_ids), entries)


def zero_test(P: InducedMatrix, alpha, beta) -> bool:
    """True iff the ``alpha x beta`` block of ``P`` has no ones."""
    return not P.block(alpha, beta).any()


def implied_zero(g: MixedGraph, alpha, beta, c=()) -> bool:
    """Fast path: is the ``alpha x beta`` block of the induced matrix all-zero?

    Arguments are node ids; ``m`` is every remaining node.
    """
    cs = canonical_system(g)
    used = set(alpha) | set(beta) | set(c)
    m = [i for i in range(g.n) if i not in used]
    amask, bmask = _query_masks(g, cs, alpha, beta, c, m)
    beta_mask = _mask(beta)
    rows = _induced_rows(cs, list(alpha), amask, bmask)
    return not any(r & beta_mask for r in rows)
