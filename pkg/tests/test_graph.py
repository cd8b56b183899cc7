import numpy as np
import pytest
from hypothesis import given

from reggraph.graph import (BadBlockOrder, BlockOrder, CyclicOrArrowIntoPast, DuplicateEdge,
                            Edge, EdgeKind, SelfLoop, Subclass, UnknownNode, VKind,
                            WrongEdgeKindForBlock, build_graph, classify_subclass,
                            collision_triples, enumerate_vs, infer_order, random_regression_graph,
                            relabel, skeleton)
from strategies import regression_graphs


def collider():
    return build_graph(["1", "2", "3"], BlockOrder([["3"]], ["1", "2"]),
                       [("->", "1", "3"), ("->", "2", "3")])


def test_build_and_lookup():
    g = collider()
    assert g.n == 3 and g.n_blocks == 2
    assert g.parents(g.index("3")) == [0, 1]
    assert g.in_context(0) and not g.in_context(2)
    assert g.order().context == frozenset({"1", "2"})


@pytest.mark.parametrize("edges, order, err", [
    ([("->", "a", "a")], BlockOrder([["a"]], ["b"]), SelfLoop),
    ([("->", "a", "zz")], BlockOrder([["a"]], ["b"]), UnknownNode),
    ([("->", "b", "a"), ("--", "a", "b")], BlockOrder([["a"]], ["b"]), DuplicateEdge),
    ([("->", "a", "b")], BlockOrder([["a"]], ["b"]), CyclicOrArrowIntoPast),
    ([("--", "a", "b")], BlockOrder([["a"]], ["b"]), WrongEdgeKindForBlock),
    ([("==", "a", "b")], BlockOrder([["a", "b"]], []), WrongEdgeKindForBlock),
    ([("--", "a", "b")], BlockOrder([], ["a", "b"]), WrongEdgeKindForBlock),
    ([("->", "a", "b")], BlockOrder([["a", "b"]], []), WrongEdgeKindForBlock),
    ([("=>", "b", "a")], BlockOrder([["a"]], ["b"]), WrongEdgeKindForBlock),
    ([], BlockOrder([["a"]], ["a", "b"]), BadBlockOrder),
    ([], BlockOrder([["a"]], []), BadBlockOrder),
])
def test_validation_errors(edges, order, err):
    with pytest.raises(err):
        build_graph(["a", "b"], order, edges)


def test_error_names():
    with pytest.raises(SelfLoop) as info:
        build_graph(["a"], BlockOrder([], ["a"]), [("->", "a", "a")])
    assert info.value.name == "SelfLoop"


def test_undirected_edges_are_normalized():
    assert Edge(EdgeKind.DASHED, 3, 1) == Edge(EdgeKind.DASHED, 1, 3)
    assert Edge(EdgeKind.ARROW, 3, 1) != Edge(EdgeKind.ARROW, 1, 3)


def test_collider_v():
    vs = enumerate_vs(collider())
    assert len(vs) == 1
    assert vs[0].kind is VKind.COLLISION and vs[0].inner == "3"


@pytest.mark.parametrize("edges, kind", [
    ([("--", "1", "2"), ("--", "2", "3")], VKind.COLLISION),
    ([("->", "1", "2"), ("--", "2", "3")], VKind.COLLISION),
    ([("->", "2", "1"), ("--", "2", "3")], VKind.TRANSMITTING),
    ([("->", "1", "2"), ("->", "2", "3")], VKind.TRANSMITTING),
    ([("->", "2", "1"), ("->", "2", "3")], VKind.TRANSMITTING),
])
def test_v_kinds(edges, kind):
    g = build_graph(["1", "2", "3"], infer_order(["1", "2", "3"], edges), edges)
    (v,) = enumerate_vs(g)
    assert v.kind is kind and v.inner == "2"


def test_full_line_vs_are_transmitting():
    g = build_graph(["1", "2", "3"], BlockOrder([], ["1", "2", "3"]),
                    [("==", "1", "2"), ("==", "2", "3")])
    (v,) = enumerate_vs(g)
    assert v.kind is VKind.TRANSMITTING


def test_no_v_when_outer_nodes_coupled():
    g = build_graph(["1", "2", "3"], BlockOrder([["3"]], ["1", "2"]),
                    [("->", "1", "3"), ("->", "2", "3"), ("==", "1", "2")])
    assert enumerate_vs(g) == []


@pytest.mark.parametrize("edges, sub", [
    ([], Subclass.DAG),
    ([("->", "1", "2")], Subclass.DAG),
    ([("==", "1", "2")], Subclass.CONCENTRATION),
    ([("--", "1", "2")], Subclass.COVARIANCE),
    ([("--", "1", "2"), ("->", "3", "1")], Subclass.GENERAL),
])
def test_classify(edges, sub):
    nodes = ["1", "2", "3"]
    assert classify_subclass(build_graph(nodes, infer_order(nodes, edges), edges)) is sub


def test_infer_order_rejects_impossible():
    assert infer_order(["a", "b", "c"], [("==", "a", "b"), ("->", "c", "a")]) is None
    assert infer_order(["a", "b", "c"], [("->", "a", "b"), ("->", "b", "c"),
                                         ("->", "c", "a")]) is None


@given(regression_graphs())
def test_infer_order_accepts_every_valid_graph(g):
    specs = [(e.kind, g.labels[e.u], g.labels[e.v]) for e in g.edges]
    order = infer_order(g.labels, specs)
    assert order is not None
    h = build_graph(g.labels, order, specs)
    assert skeleton(h) == skeleton(g) and collision_triples(h) == collision_triples(g)


@given(regression_graphs())
def test_relabel_preserves_structure(g):
    perm = list(reversed(range(g.n)))
    h = relabel(g, perm)
    assert skeleton(h) == skeleton(g)
    assert enumerate_vs(h) == enumerate_vs(g)
    assert relabel(h, perm) == g


@given(regression_graphs())
def test_vs_have_uncoupled_outer_nodes(g):
    for v in enumerate_vs(g):
        a, b = v.outer
        assert not g.adjacent(a, b)
        assert g.adjacent(a, v.inner) and g.adjacent(b, v.inner)


def test_random_graphs_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(50):
        g = random_regression_graph(int(rng.integers(1, 9)), rng)
        specs = [(e.kind, g.labels[e.u], g.labels[e.v]) for e in g.edges]
        build_graph(g.labels, g.order(), specs)
