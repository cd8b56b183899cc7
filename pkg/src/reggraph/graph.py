"""Graph data model for regression graphs and summary graphs.

Nodes carry dense integer ids ``0..n-1`` and unique text labels. Blocks are
ordered from the future (index 0, the primary responses) to the past; the
context block, if any, always has the largest index.

Edge conventions:

* ``ARROW``  ``u -> v``: ``u`` is the regressor (tail), ``v`` the response.
* ``DASHED`` ``u -- v``: dependent responses on equal standing.
* ``FULL``   ``u == v``: dependent context variables.
* ``DOUBLE`` ``u -> v`` superposed with ``u -- v``; summary graphs only.

Undirected edges are stored with ``u < v``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(Exception):
    """Base class for graph construction errors."""

    @property
    def name(self):
        return type(self).__name__


class UnknownNode(GraphError):
    pass


class BadBlockOrder(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class CyclicOrArrowIntoPast(GraphError):
    pass


class WrongEdgeKindForBlock(GraphError):
    pass


class EdgeKind(str, enum.Enum):
    ARROW = "arrow"
    DASHED = "dashed"
    FULL = "full"
    DOUBLE = "double"

    @property
    def directed(self):
        return self in (EdgeKind.ARROW, EdgeKind.DOUBLE)


# endpoint marks
TAIL = "tail"
HEAD = "head"


@dataclass(frozen=True, order=True)
class Edge:
    kind: EdgeKind
    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoop(f"self-loop on node {self.u}")
        if not self.kind.directed and self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    @property
    def pair(self):
        return frozenset((self.u, self.v))

    def other(self, node):
        return self.v if node == self.u else self.u

    def elementary(self):
        """Split into ``(u, v, mark_at_u, mark_at_v)`` single edges."""
        if self.kind is EdgeKind.ARROW:
            return [(self.u, self.v, TAIL, HEAD)]
        if self.kind is EdgeKind.DASHED:
            return [(self.u, self.v, HEAD, HEAD)]
        if self.kind is EdgeKind.FULL:
            return [(self.u, self.v, TAIL, TAIL)]
        return [(self.u, self.v, TAIL, HEAD), (self.u, self.v, HEAD, HEAD)]

    def has_head_at(self, node):
        for a, b, ma, mb in self.elementary():
            if (a == node and ma == HEAD) or (b == node and mb == HEAD):
                return True
        return False


@dataclass(frozen=True)
class BlockOrder:
    """Ordered response blocks (future first) followed by the context block."""

    blocks: tuple
    context: frozenset = frozenset()

    def __init__(self, blocks: Iterable[Iterable] = (), context: Iterable = ()):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in blocks))
        object.__setattr__(self, "context", frozenset(context))

    @property
    def n_blocks(self):
        return len(self.blocks) + 1

    def members(self):
        out = set()
        for b in self.blocks:
            out |= b
        return out | self.context


class Subclass(str, enum.Enum):
    DAG = "dag"
    CONCENTRATION = "concentration"
    COVARIANCE = "covariance"
    GENERAL = "general"


class VKind(str, enum.Enum):
    COLLISION = "collision"
    TRANSMITTING = "transmitting"


@dataclass(frozen=True, order=True)
class VConfiguration:
    inner: str
    outer: tuple
    kind: VKind
    edge_kinds: tuple = field(compare=False, default=())

    @property
    def triple(self):
        return (self.inner, frozenset(self.outer))


class MixedGraph:
    """Immutable graph over labelled nodes with a block order.

    Use :func:`build_graph` for validated regression graphs; summary graphs
    are produced by :mod:`reggraph.transform` or the parser.
    """

    is_summary = False

    def __init__(self, labels: Sequence[str], block_of: Sequence[int], edges,
                 node_types: Sequence[str] | None = None, transform=None):
        self.labels = tuple(labels)
        self.block_of = tuple(block_of)
        self.n = len(self.labels)
        self.n_blocks = (max(self.block_of) + 1) if self.block_of else 1
        self.context_block = None  # set by subclasses that know it
        self.node_types = tuple(node_types) if node_types else ("continuous",) * self.n
        self.transform = transform
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.edges = frozenset(edges)
        self._by_pair = {}
        self._incident = [[] for _ in range(self.n)]
        for e in self.edges:
            if e.u >= self.n or e.v >= self.n or e.u < 0 or e.v < 0:
                raise UnknownNode(f"edge endpoint out of range: {e}")
            if e.pair in self._by_pair:
                raise DuplicateEdge(
                    f"more than one edge between {self.labels[e.u]} and {self.labels[e.v]}")
            self._by_pair[e.pair] = e
            self._incident[e.u].append(e)
            self._incident[e.v].append(e)

    # -- lookup -----------------------------------------------------------
    def index(self, node) -> int:
        if isinstance(node, int):
            if not 0 <= node < self.n:
                raise UnknownNode(f"no node with id {node}")
            return node
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNode(f"no node labelled {node!r}") from None

    def indices(self, nodes) -> list:
        if isinstance(nodes, (str, int)):
            nodes = [nodes]
        return sorted({self.index(x) for x in nodes})

    def label(self, i: int) -> str:
        return self.labels[i]

    def edge(self, a, b):
        return self._by_pair.get(frozenset((self.index(a), self.index(b))))

    def adjacent(self, a, b) -> bool:
        return self.edge(a, b) is not None

    def incident(self, i):
        return list(self._incident[i])

    def neighbors(self, i):
        return sorted(e.other(i) for e in self._incident[i])

    def parents(self, i):
        return sorted(e.u for e in self._incident[i] if e.kind.directed and e.v == i)

    def children(self, i):
        return sorted(e.v for e in self._incident[i] if e.kind.directed and e.u == i)

    def edges_of_kind(self, *kinds):
        return sorted(e for e in self.edges if e.kind in kinds)

    def blocks(self):
        out = [[] for _ in range(self.n_blocks)]
        for i, b in enumerate(self.block_of):
            out[b].append(i)
        return out

    def ancestors(self, nodes) -> set:
        """Nodes with a directed path into ``nodes`` (inclusive)."""
        seen = set()
        stack = list(nodes)
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(self.parents(x))
        return seen

    # -- comparison -------------------------------------------------------
    def _key(self):
        return (type(self).__name__, self.labels, self.block_of, self.edges,
                self.node_types)

    def __eq__(self, other):
        return isinstance(other, MixedGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def describe_edge(self, e: Edge) -> str:
        a, b = self.labels[e.u], self.labels[e.v]
        sym = {EdgeKind.ARROW: "->", EdgeKind.DASHED: "--",
               EdgeKind.FULL: "==", EdgeKind.DOUBLE: "=>"}[e.kind]
        return f"{a} {sym} {b}"

    def __repr__(self):
        edges = ", ".join(self.describe_edge(e) for e in sorted(self.edges))
        return f"{type(self).__name__}({list(self.labels)}; {edges})"


class RegressionGraph(MixedGraph):
    def __init__(self, labels, block_of, edges, node_types=None, has_context=True):
        super().__init__(labels, block_of, edges, node_types)
        self.has_context = has_context
        self.context_block = self.n_blocks - 1 if has_context else None

    def in_context(self, i) -> bool:
        return self.context_block is not None and self.block_of[i] == self.context_block

    def order(self) -> BlockOrder:
        blocks = self.blocks()
        if self.has_context:
            return BlockOrder([[self.labels[i] for i in b] for b in blocks[:-1]],
                              [self.labels[i] for i in blocks[-1]])
        return BlockOrder([[self.labels[i] for i in b] for b in blocks], [])


class SummaryGraph(MixedGraph):
    """Regression-graph generalization with double edges.

    Block indices are kept from the generating graph and only serve to
    decide which nodes are intermediate between two others.
    """

    is_summary = True

    def __init__(self, labels, block_of, edges, node_types=None, transform=None,
                 has_context=True):
        super().__init__(labels, block_of, edges, node_types, transform)
        self.has_context = has_context
        self.context_block = self.n_blocks - 1 if has_context else None
        if _has_directed_cycle(self):
            raise CyclicOrArrowIntoPast("summary graph arrows form a cycle")

    order = RegressionGraph.order


def _has_directed_cycle(g: MixedGraph) -> bool:
    state = [0] * g.n
    for start in range(g.n):
        if state[start]:
            continue
        stack = [(start, iter(g.children(start)))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state[nxt] == 1:
                return True
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(g.children(nxt))))
    return False


def _coerce_kind(kind) -> EdgeKind:
    if isinstance(kind, EdgeKind):
        return kind
    aliases = {"->": EdgeKind.ARROW, "--": EdgeKind.DASHED, "==": EdgeKind.FULL,
               "=>": EdgeKind.DOUBLE}
    if kind in aliases:
        return aliases[kind]
    return EdgeKind(kind)


def _resolve_edges(labels, edges):
    index = {lab: i for i, lab in enumerate(labels)}
    out = []
    seen = {}
    for spec in edges:
        if isinstance(spec, Edge):
            e = spec
        else:
            kind, a, b = spec
            for x in (a, b):
                if x not in index:
                    raise UnknownNode(f"edge endpoint {x!r} is not a declared node")
            e = Edge(_coerce_kind(kind), index[a], index[b])
        if e.pair in seen:
            raise DuplicateEdge(
                f"duplicate edge between {labels[e.u]} and {labels[e.v]}")
        seen[e.pair] = e
        out.append(e)
    return out


def _block_index(labels, order: BlockOrder):
    members = order.members()
    total = sum(len(b) for b in order.blocks) + len(order.context)
    if total != len(members):
        raise BadBlockOrder("blocks are not disjoint")
    if members != set(labels):
        missing = set(labels) - members
        extra = members - set(labels)
        raise BadBlockOrder(f"block order does not partition the nodes "
                            f"(missing={sorted(missing)}, unknown={sorted(extra)})")
    if any(not b for b in order.blocks):
        raise BadBlockOrder("empty response block")
    where = {}
    for k, b in enumerate(order.blocks):
        for lab in b:
            where[lab] = k
    has_context = bool(order.context)
    for lab in order.context:
        where[lab] = len(order.blocks)
    return [where[lab] for lab in labels], has_context


def build_graph(nodes: Sequence[str], order: BlockOrder, edges=(),
                node_types=None) -> RegressionGraph:
    """Construct and validate a regression graph.

    ``edges`` holds ``(kind, a, b)`` triples with labels as endpoints; for
    arrows ``a`` is the regressor and ``b`` the response.
    """
    labels = list(nodes)
    if len(set(labels)) != len(labels):
        raise BadBlockOrder("node labels must be unique")
    block_of, has_context = _block_index(labels, order)
    resolved = _resolve_edges(labels, edges)
    ctx = len(order.blocks) if has_context else None
    for e in resolved:
        a, b = labels[e.u], labels[e.v]
        bu, bv = block_of[e.u], block_of[e.v]
        if e.kind is EdgeKind.DOUBLE:
            raise WrongEdgeKindForBlock(f"double edge {a}, {b} in a regression graph")
        if e.kind is EdgeKind.ARROW:
            if bu == bv:
                raise WrongEdgeKindForBlock(f"arrow {a} -> {b} within one block")
            if bu < bv:
                raise CyclicOrArrowIntoPast(f"arrow {a} -> {b} points into the past")
        elif bu != bv:
            raise WrongEdgeKindForBlock(f"{e.kind.value} line {a}, {b} crosses blocks")
        elif e.kind is EdgeKind.FULL and bu != ctx:
            raise WrongEdgeKindForBlock(f"full line {a}, {b} between responses")
        elif e.kind is EdgeKind.DASHED and bu == ctx:
            raise WrongEdgeKindForBlock(f"dashed line {a}, {b} between context nodes")
    return RegressionGraph(labels, block_of, resolved, node_types, has_context=has_context)


def infer_order(nodes: Sequence[str], edges) -> BlockOrder | None:
    """Find a block order under which ``edges`` form a valid regression graph.

    Nodes touching a full line, or with no arrowhead and no dashed line, go
    to the context; each dashed-connected set of responses becomes a block,
    and blocks are layered so that arrows point to earlier blocks. Returns
    ``None`` when no such order exists.
    """
    labels = list(nodes)
    resolved = _resolve_edges(labels, edges)
    n = len(labels)
    if any(e.kind is EdgeKind.DOUBLE for e in resolved):
        return None
    full = {x for e in resolved if e.kind is EdgeKind.FULL for x in (e.u, e.v)}
    dashed = {x for e in resolved if e.kind is EdgeKind.DASHED for x in (e.u, e.v)}
    heads = {e.v for e in resolved if e.kind is EdgeKind.ARROW}
    if full & (dashed | heads):
        return None
    responses = dashed | heads
    # dashed components
    comp = {}
    for i in sorted(responses):
        comp[i] = i
    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x
    for e in resolved:
        if e.kind is EdgeKind.DASHED:
            comp[find(e.u)] = find(e.v)
    groups = {}
    for i in sorted(responses):
        groups.setdefault(find(i), []).append(i)
    # level = longest chain of arrows below; blocks ordered future-first
    gid = {i: find(i) for i in responses}
    succ = {r: set() for r in groups}  # regressor group -> response group
    for e in resolved:
        if e.kind is EdgeKind.ARROW and e.u in gid:
            if gid[e.u] == gid[e.v]:
                return None
            succ[gid[e.u]].add(gid[e.v])
    depth = {}
    visiting = set()
    def level(r):
        if r in depth:
            return depth[r]
        if r in visiting:
            raise ValueError
        visiting.add(r)
        d = 1 + max((level(s) for s in succ[r]), default=-1)
        visiting.discard(r)
        depth[r] = d
        return d
    try:
        for r in groups:
            level(r)
    except ValueError:
        return None
    # sinks first; a group always follows every group it points to
    ordered = sorted(groups, key=lambda r: (depth[r], min(groups[r])))
    blocks = [[labels[i] for i in groups[r]] for r in ordered]
    context = [labels[i] for i in range(n) if i not in responses]
    return BlockOrder(blocks, context)


def as_regression_graph(nodes, edges, node_types=None) -> RegressionGraph | None:
    order = infer_order(nodes, edges)
    if order is None:
        return None
    try:
        return build_graph(nodes, order, edges, node_types)
    except GraphError:
        return None


def skeleton(g: MixedGraph) -> frozenset:
    """Coupled node pairs, as frozensets of labels."""
    return frozenset(frozenset((g.labels[e.u], g.labels[e.v])) for e in g.edges)


def _edge_view(g: MixedGraph, e: Edge, inner: int) -> str:
    if e.kind is EdgeKind.ARROW:
        return "arrow_in" if e.v == inner else "arrow_out"
    if e.kind is EdgeKind.DOUBLE:
        return "double_in" if e.v == inner else "double_out"
    return e.kind.value


def enumerate_vs(g: MixedGraph) -> list:
    """All V-configurations ``(i, inner, k)`` with ``i``, ``k`` uncoupled."""
    out = []
    for inner in range(g.n):
        inc = sorted(g.incident(inner), key=lambda e: e.other(inner))
        for e1, e2 in itertools.combinations(inc, 2):
            i, k = e1.other(inner), e2.other(inner)
            if g.adjacent(i, k):
                continue
            collide = e1.has_head_at(inner) and e2.has_head_at(inner)
            li, lk = g.labels[i], g.labels[k]
            out.append(VConfiguration(
                inner=g.labels[inner],
                outer=tuple(sorted((li, lk))),
                kind=VKind.COLLISION if collide else VKind.TRANSMITTING,
                edge_kinds=(_edge_view(g, e1, inner), _edge_view(g, e2, inner)),
            ))
    return sorted(out)


def collision_triples(g: MixedGraph) -> frozenset:
    return frozenset(v.triple for v in enumerate_vs(g) if v.kind is VKind.COLLISION)


def classify_subclass(g: MixedGraph) -> Subclass:
    """Pure subclass of ``g``; an edgeless graph counts as a DAG."""
    kinds = {e.kind for e in g.edges}
    if kinds <= {EdgeKind.ARROW}:
        return Subclass.DAG
    if kinds == {EdgeKind.FULL}:
        return Subclass.CONCENTRATION
    if kinds == {EdgeKind.DASHED}:
        return Subclass.COVARIANCE
    return Subclass.GENERAL


def relabel(g: MixedGraph, perm: Sequence[int]) -> MixedGraph:
    """Same labelled graph with node ids permuted: new id of old node ``i`` is ``perm[i]``."""
    n = g.n
    labels = [None] * n
    block_of = [0] * n
    types = [None] * n
    for i in range(n):
        labels[perm[i]] = g.labels[i]
        block_of[perm[i]] = g.block_of[i]
        types[perm[i]] = g.node_types[i]
    edges = [Edge(e.kind, perm[e.u], perm[e.v]) for e in g.edges]
    if isinstance(g, SummaryGraph):
        return SummaryGraph(labels, block_of, edges, types, g.transform, g.has_context)
    return RegressionGraph(labels, block_of, edges, types, has_context=g.has_context)


def random_regression_graph(n: int, rng, p_edge: float = 0.5, n_blocks=None,
                            with_context=True) -> RegressionGraph:
    """Random valid regression graph; ``rng`` is a ``numpy.random.Generator``."""
    if n_blocks is None:
        n_blocks = int(rng.integers(1, n + 1))
    assign = rng.integers(0, n_blocks, size=n)
    # drop empty blocks and keep order
    used = sorted(set(int(b) for b in assign))
    block_of = [used.index(int(b)) for b in assign]
    has_context = with_context and (len(used) > 1 or rng.random() < 0.5)
    ctx = len(used) - 1 if has_context else None
    edges = []
    for i, k in itertools.combinations(range(n), 2):
        if rng.random() >= p_edge:
            continue
        bi, bk = block_of[i], block_of[k]
        if bi == bk:
            edges.append(Edge(EdgeKind.FULL if bi == ctx else EdgeKind.DASHED, i, k))
        elif bi > bk:
            edges.append(Edge(EdgeKind.ARROW, i, k))
        else:
            edges.append(Edge(EdgeKind.ARROW, k, i))
    labels = [f"X{i}" for i in range(n)]
    return RegressionGraph(labels, block_of, edges, has_context=has_context)
