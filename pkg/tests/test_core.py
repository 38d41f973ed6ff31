import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeweighted.core import (
    DegreeDistribution,
    DegreeSequence,
    HalfEdge,
    Matching,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
    child_sequence,
    edge_key,
    falling_factorial,
    graph_minus_tree,
    tree_as_multigraph,
    validate_for_tree_sampling,
    validate_for_tree_weighted,
)
from treeweighted.errors import (
    DegreeTooSmall,
    InvalidDegreeSequence,
    InvalidTree,
    OddSum,
    SumTooSmall,
    TreeEdgeMissing,
)

from strategies import parent_arrays


def test_tree_sampling_validation():
    assert validate_for_tree_sampling([2, 1]).n == 2
    with pytest.raises(SumTooSmall):
        validate_for_tree_sampling([1, 1])
    with pytest.raises(DegreeTooSmall):
        validate_for_tree_sampling([2, 0, 2])


def test_tree_weighted_validation():
    validate_for_tree_weighted([2, 2, 2])
    with pytest.raises(OddSum):
        validate_for_tree_weighted([2, 2, 1])
    with pytest.raises(SumTooSmall):
        validate_for_tree_weighted([2, 1, 1])
    with pytest.raises(InvalidDegreeSequence):
        validate_for_tree_weighted([4])


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate_for_tree_sampling([1, 1])


def test_falling_factorial():
    assert falling_factorial(3, 2) == 6
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, -1) == 0
    assert falling_factorial(2, 3) == 0
    assert falling_factorial(0, 0) == 1


def test_degree_sequence_basics():
    d = DegreeSequence((3, 1, 2))
    assert d.n == 3 and d.twice_m == 6
    assert d[1] == 3 and d[3] == 2
    assert d.half_edges()[0] == HalfEdge(1, 1)
    assert HalfEdge(1, 3).is_root(d) and not HalfEdge(1, 2).is_root(d)
    assert len(d.non_root_half_edges()) == d.twice_m - d.n
    with pytest.raises(IndexError):
        d[0]
    with pytest.raises(InvalidDegreeSequence):
        DegreeSequence((1, -1))
    assert DegreeSequence((0, 2)).twice_m == 2  # zero degrees are representable


def test_degree_distribution():
    p = DegreeSequence((2, 4)).distribution()
    assert p[2] == 0.5 and p[3] == 0
    assert p.mu1 == 3 and p.mu2 == 10
    with pytest.raises(ValueError):
        DegreeDistribution({1: 0.5})


def test_child_sequence_examples():
    assert child_sequence(RootedTree([0, 1, 2])) == (1, 1, 0)
    assert child_sequence(RootedTree([0, 1, 1])) == (2, 0, 0)
    assert child_sequence(RootedTree([0])) == (0,)


def test_invalid_trees():
    with pytest.raises(InvalidTree):
        RootedTree([0, 3, 2])  # cycle 2 <-> 3
    with pytest.raises(InvalidTree):
        RootedTree([0, 0])
    with pytest.raises(InvalidTree):
        RootedTree([0, 1, 1], step=[0, 1, 1])


def test_tree_from_edges_roundtrip():
    t = RootedTree.from_edges(3, [(2, 1), (3, 2)], root=1)
    assert t.parent.tolist() == [0, 1, 2]
    u = RootedTree.from_undirected(3, [(1, 2), (2, 3)], root=3)
    assert u.root == 3 and u.parent_of(1) == 2
    assert t.depths().tolist() == [0, 1, 2]


def test_graph_minus_tree_examples():
    path = RootedTree([0, 1, 2])
    triangle = Multigraph.from_pairs(3, [(1, 2), (2, 3), (1, 3)])
    assert graph_minus_tree(triangle, path).edges() == [(1, 3, 1)]
    double = Multigraph(2, {(1, 2): 2})
    assert graph_minus_tree(double, RootedTree([0, 1])).multiplicity(1, 2) == 1
    assert graph_minus_tree(tree_as_multigraph(path), path).edges() == []
    with pytest.raises(TreeEdgeMissing):
        graph_minus_tree(Multigraph.from_pairs(3, [(1, 3), (2, 3)]), path)


def test_multigraph_loops_count_twice():
    g = Multigraph.from_pairs(2, [(1, 1), (1, 2), (2, 1)])
    assert g.degrees == (4, 2)
    assert g.multiplicity(2, 1) == 2
    assert g.total_multiplicity == 3
    assert not g.is_simple()
    assert edge_key(3, 1) == (1, 3)


def test_matching_is_canonical():
    a = Matching(((HalfEdge(2, 1), HalfEdge(1, 1)), (HalfEdge(1, 2), HalfEdge(2, 2))))
    b = Matching(((HalfEdge(2, 2), HalfEdge(1, 2)), (HalfEdge(1, 1), HalfEdge(2, 1))))
    assert a == b
    assert a.partner(HalfEdge(1, 1)) == HalfEdge(2, 1)
    assert a.to_multigraph(2).edges() == [(1, 2, 2)]


def test_tree_rooted_graph_checks():
    t = RootedTree([0, 1])
    g = Multigraph(2, {(1, 2): 2})
    x = TreeRootedGraph(g, t, HalfEdge(1, 2), HalfEdge(2, 1))
    assert x.gamma == (1, 2) and not x.gamma_is_loop
    assert x.rest.edges() == [(1, 2, 1)]
    with pytest.raises(ValueError):
        TreeRootedGraph(g, t, HalfEdge(2, 2), HalfEdge(1, 1))  # head not at root
    with pytest.raises(ValueError):
        TreeRootedGraph(Multigraph(2, {(1, 2): 1, (2, 2): 1}), t, HalfEdge(1, 2), HalfEdge(2, 1))


@given(parent_arrays())
def test_child_sequence_sums_to_n_minus_one(parent):
    t = RootedTree(parent)
    assert sum(t.child_sequence()) == t.n - 1
    assert len(t.edges()) == t.n - 1
    assert RootedTree(t.parent) == t and hash(RootedTree(t.parent)) == hash(t)


@given(parent_arrays(min_n=2), st.lists(st.tuples(st.integers(1, 8), st.integers(1, 8)), max_size=6))
def test_graph_minus_tree_then_readd(parent, extra):
    t = RootedTree(parent)
    extra = [(u, v) for u, v in extra if u <= t.n and v <= t.n]
    g = tree_as_multigraph(t).union(Multigraph.from_pairs(t.n, extra))
    rest = graph_minus_tree(g, t)
    assert rest.union(tree_as_multigraph(t)) == g
    assert sum(g.degrees) == 2 * g.total_multiplicity
