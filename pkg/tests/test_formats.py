from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeweighted.core import HalfEdge, Multigraph, RootedTree
from treeweighted.errors import SpecParse
from treeweighted.formats import (
    encode_key,
    exact_distribution_csv,
    format_degree_sequence,
    format_multigraph,
    format_trace,
    format_tree,
    histogram_csv,
    parse_degree_sequence,
    parse_multigraph,
    parse_tree,
    read_degree_sequence,
    table_csv,
)

from strategies import parent_arrays


def test_parse_degree_sequence_mixed_forms():
    d = parse_degree_sequence("3\n# comment\n2:2\n1  # trailing\n")
    assert d.degrees == (3, 2, 2, 1)
    with pytest.raises(SpecParse):
        parse_degree_sequence("x\n")
    with pytest.raises(SpecParse):
        parse_degree_sequence("# nothing\n")


def test_read_degree_sequence(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("3:4\n")
    assert read_degree_sequence(path).degrees == (3, 3, 3, 3)
    assert parse_degree_sequence(format_degree_sequence(read_degree_sequence(path))).degrees == (3,) * 4


def test_multigraph_roundtrip():
    g = Multigraph(4, {(1, 1): 1, (1, 2): 2, (3, 4): 1})
    text = format_multigraph(g)
    assert text == "n 4\n1 1 1\n1 2 2\n3 4 1\n"
    assert parse_multigraph(text) == g
    with pytest.raises(SpecParse):
        parse_multigraph("1 2\n")


@given(parent_arrays())
def test_tree_roundtrip(parent):
    t = RootedTree(parent)
    assert parse_tree(format_tree(t)) == t


def test_tree_requires_root_header():
    with pytest.raises(SpecParse):
        parse_tree("2 1\n")


def test_trace_lines():
    text = format_trace([(HalfEdge(2, 1), HalfEdge(1, 1))])
    assert text == "1 2 1 1 1\n"


def test_csv_writers():
    assert encode_key((1, (2, 3))) == "(1 (2 3))"
    assert histogram_csv({(0, 1): 3, (0, 0): 2}) == "key,count\n(0 0),2\n(0 1),3\n"
    assert table_csv({(1, 1): 4}) == "k,l,count\n1,1,4\n"
    assert exact_distribution_csv({"a": Fraction(1, 3), "b": Fraction(2, 3)}) == (
        "key,probability\na,1/3\nb,2/3\n"
    )


@given(st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.integers(1, 100)))
def test_histogram_csv_is_order_independent(hist):
    shuffled = dict(reversed(list(hist.items())))
    assert histogram_csv(hist) == histogram_csv(shuffled)
