"""Exhaustive enumeration of small graphs and queries."""

from __future__ import annotations

import itertools

from .graph import Edge, EdgeKind, RegressionGraph


def _labels(n):
    return [str(i + 1) for i in range(n)]


def all_dags(n: int):
    """Every DAG on ``n`` nodes compatible with the order ``n-1, ..., 0``.

    Each labelled DAG is isomorphic to one of these. Node ``i`` sits in
    block ``i``; the last node forms the context.
    """
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [Edge(EdgeKind.ARROW, k, i) for j, (i, k) in enumerate(pairs) if mask >> j & 1]
        yield RegressionGraph(_labels(n), list(range(n)), edges, has_context=n > 0)


def compositions(n: int):
    """Block sizes summing to ``n``, in order."""
    for cuts in range(1 << max(n - 1, 0)):
        sizes, cur = [], 1
        for j in range(n - 1):
            if cuts >> j & 1:
                sizes.append(cur)
                cur = 1
            else:
                cur += 1
        sizes.append(cur)
        yield sizes


def all_regression_graphs(n: int):
    """Every regression graph on ``n`` nodes up to relabelling.

    Node ids are non-decreasing in block index, which every labelled graph
    can be brought to by a permutation.
    """
    pairs = list(itertools.combinations(range(n), 2))
    for sizes in compositions(n):
        block_of = [b for b, s in enumerate(sizes) for _ in range(s)]
        for has_context in (True, False):
            ctx = len(sizes) - 1 if has_context else None
            for mask in range(1 << len(pairs)):
                edges = []
                for j, (i, k) in enumerate(pairs):
                    if not mask >> j & 1:
                        continue
                    if block_of[i] == block_of[k]:
                        kind = EdgeKind.FULL if block_of[i] == ctx else EdgeKind.DASHED
                        edges.append(Edge(kind, i, k))
                    else:
                        edges.append(Edge(EdgeKind.ARROW, k, i))
                yield RegressionGraph(_labels(n), block_of, edges, has_context=has_context)


def disjoint_triples(nodes, halve=False):
    """All ``(alpha, beta, c)`` with nonempty, pairwise disjoint ``alpha`` and ``beta``.

    With ``halve`` only one of ``(alpha, beta)`` and ``(beta, alpha)`` is kept.
    """
    nodes = list(nodes)
    for lab in itertools.product(range(4), repeat=len(nodes)):
        a = tuple(x for x, t in zip(nodes, lab) if t == 0)
        b = tuple(x for x, t in zip(nodes, lab) if t == 1)
        if not a or not b or (halve and min(a) > min(b)):
            continue
        c = tuple(x for x, t in zip(nodes, lab) if t == 2)
        yield a, b, c


def pairwise_triples(nodes):
    """``(i, k, c)`` for every pair ``i < k`` and every ``c`` among the rest."""
    nodes = list(nodes)
    for i, k in itertools.combinations(nodes, 2):
        rest = [x for x in nodes if x not in (i, k)]
        for r in range(len(rest) + 1):
            for c in itertools.combinations(rest, r):
                yield (i,), (k,), c


def transform_specs(nodes):
    """Every ``(M, C)`` split of ``nodes`` into marginalized, conditioned and kept."""
    nodes = list(nodes)
    for lab in itertools.product(range(3), repeat=len(nodes)):
        m = [x for x, t in zip(nodes, lab) if t == 1]
        c = [x for x, t in zip(nodes, lab) if t == 2]
        yield m, c


def ordered_partitions(items):
    """Every sequence of nonempty disjoint blocks covering ``items``."""
    items = list(items)
    if not items:
        yield []
        return
    for r in range(1, len(items) + 1):
        for first in itertools.combinations(items, r):
            rest = [x for x in items if x not in first]
            for tail in ordered_partitions(rest):
                yield [list(first)] + tail


def all_labelled_regression_graphs(n: int):
    """Every regression graph over the labels ``1..n``, one per block order and edge set."""
    pairs = list(itertools.combinations(range(n), 2))
    for blocks in ordered_partitions(range(n)):
        block_of = [0] * n
        for b, members in enumerate(blocks):
            for x in members:
                block_of[x] = b
        for has_context in (True, False):
            ctx = len(blocks) - 1 if has_context else None
            for mask in range(1 << len(pairs)):
                edges = []
                for j, (i, k) in enumerate(pairs):
                    if not mask >> j & 1:
                        continue
                    bi, bk = block_of[i], block_of[k]
                    if bi == bk:
                        kind = EdgeKind.FULL if bi == ctx else EdgeKind.DASHED
                        edges.append(Edge(kind, i, k))
                    elif bi > bk:
                        edges.append(Edge(EdgeKind.ARROW, i, k))
                    else:
                        edges.append(Edge(EdgeKind.ARROW, k, i))
                yield RegressionGraph(_labels(n), block_of, edges, has_context=has_context)
