"""Markov equivalence via skeletons and collision Vs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import GraphError, MixedGraph, Subclass, VKind, collision_triples, enumerate_vs, skeleton


class NodeSetMismatch(GraphError):
    pass


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    skeleton_diff: frozenset
    collision_diff: frozenset
    # informational only: False when some pair of nodes is ordered
    # oppositely by the two block orders
    orders_compatible: bool = True


def _orders_compatible(g1: MixedGraph, g2: MixedGraph) -> bool:
    pos2 = [g2.block_of[g2.index(lab)] for lab in g1.labels]
    for i, k in itertools.combinations(range(g1.n), 2):
        a = g1.block_of[i] - g1.block_of[k]
        b = pos2[i] - pos2[k]
        if a * b < 0:
            return False
    return True


def markov_equivalent(g1: MixedGraph, g2: MixedGraph) -> EquivalenceReport:
    """Same skeleton and the same collision Vs, compared as ``(inner, {i, k})``."""
    if set(g1.labels) != set(g2.labels):
        raise NodeSetMismatch("graphs are defined over different node sets")
    sk = skeleton(g1) ^ skeleton(g2)
    col = collision_triples(g1) ^ collision_triples(g2)
    return EquivalenceReport(not sk and not col, sk, col, _orders_compatible(g1, g2))


def _dag_orientation_exists(g: MixedGraph) -> bool:
    """Backtracking search for an acyclic orientation of the skeleton whose
    collision Vs are exactly those of ``g``."""
    target = {(g.index(inner), frozenset(g.index(x) for x in outer))
              for inner, outer in collision_triples(g)}
    pairs = sorted(tuple(sorted((e.u, e.v))) for e in g.edges)
    vs = [(g.index(v.inner), tuple(g.index(x) for x in v.outer)) for v in enumerate_vs(g)]
    # Vs that become decidable once a given pair is oriented
    by_pair = {p: [] for p in pairs}
    for inner, (i, k) in vs:
        p1, p2 = tuple(sorted((i, inner))), tuple(sorted((k, inner)))
        later = max(pairs.index(p1), pairs.index(p2))
        by_pair[pairs[later]].append((inner, i, k))
    head = {}  # pair -> node receiving the arrowhead
    children = {i: set() for i in range(g.n)}

    def reaches(src, dst):
        stack, seen = [src], set()
        while stack:
            x = stack.pop()
            if x == dst:
                return True
            if x not in seen:
                seen.add(x)
                stack.extend(children[x])
        return False

    def ok(p):
        for inner, i, k in by_pair[p]:
            into = head[tuple(sorted((i, inner)))] == inner and \
                head[tuple(sorted((k, inner)))] == inner
            if into != ((inner, frozenset((i, k))) in target):
                return False
        return True

    def step(j):
        if j == len(pairs):
            return True
        u, v = pairs[j]
        for a, b in ((u, v), (v, u)):
            if reaches(b, a):
                continue
            head[pairs[j]] = b
            children[a].add(b)
            if ok(pairs[j]) and step(j + 1):
                return True
            children[a].discard(b)
            del head[pairs[j]]
        return False

    return step(0)


def equivalent_subclass_members(g: MixedGraph) -> set:
    """Pure subclasses with a Markov-equivalent member on the skeleton of ``g``."""
    kinds = {v.kind for v in enumerate_vs(g)}
    out = set()
    if VKind.COLLISION not in kinds:
        out.add(Subclass.CONCENTRATION)
    if VKind.TRANSMITTING not in kinds:
        out.add(Subclass.COVARIANCE)
    if _dag_orientation_exists(g):
        out.add(Subclass.DAG)
    return out
