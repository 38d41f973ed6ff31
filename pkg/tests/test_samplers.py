from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from treeweighted import oracle, theory
from treeweighted.core import DegreeSequence, HalfEdge, Multigraph, RootedTree
from treeweighted.errors import DegreeTooSmall, InvalidDegreeSequence, OddCount, OddSum
from treeweighted.samplers import (
    RandomSource,
    as_generator,
    configuration_model_sample,
    pitman_parents,
    pitman_sample,
    plan_coalescent,
    sample_pendant_pairs,
    tree_weighted_sample,
    uniform_matching,
)
from treeweighted.statistics import distribution_distances

from strategies import degree_sequences


def test_random_source_is_reproducible():
    a = RandomSource(7, 3).generator().integers(0, 1 << 30, 5)
    b = RandomSource(7, 3).generator().integers(0, 1 << 30, 5)
    c = RandomSource(7, 4).generator().integers(0, 1 << 30, 5)
    assert (a == b).all() and not (a == c).all()
    assert RandomSource(7).describe()["bit_generator"] == "PCG64"
    gen = np.random.default_rng(1)
    assert as_generator(gen) is gen


def test_two_vertex_tree_is_deterministic():
    for seed in range(5):
        tree, trace = pitman_sample([2, 1], RandomSource(seed))
        assert tree.root == 1 and tree.parent.tolist() == [0, 1]
        assert trace == [(HalfEdge(2, 1), HalfEdge(1, 1))]


def test_rooted_paths_equally_likely():
    counts = Counter(RootedTree(p).key() for p in pitman_parents([2, 2, 2], 20_000, RandomSource(1)))
    assert len(counts) == 6
    assert all(abs(c / 20_000 - 1 / 6) < 0.01 for c in counts.values())


def test_three_one_one_matches_oracle():
    exact = oracle.exact_tree_distribution([3, 1, 1])
    counts = Counter(RootedTree(p).key() for p in pitman_parents([3, 1, 1], 20_000, RandomSource(2)))
    dist = distribution_distances(counts, {k: float(p) for k, p in exact.items()})
    assert dist.chi2_p > 0.001 and dist.tv < 0.02


def test_step_counts():
    d = DegreeSequence((3, 2, 2, 1))
    plan = plan_coalescent(d)
    n, k = d.n, np.arange(1, d.n)
    assert plan.highs[: n - 1].tolist() == (d.twice_m - n + 1 - k).tolist()
    assert plan.highs[n - 1 :].tolist() == (n - k).tolist()
    assert plan.highs[-1] == 1


@given(degree_sequences(max_n=7), st.integers(0, 2**32))
def test_trace_is_an_execution_path(degrees, seed):
    d = DegreeSequence(degrees)
    tree, trace = pitman_sample(d, RandomSource(seed))
    comp = {v: v for v in range(1, d.n + 1)}
    used = set()
    for k, (r, s) in enumerate(trace, start=1):
        assert r.is_root(d) and not s.is_root(d)
        assert comp[r.vertex] != comp[s.vertex]
        assert r not in used and s not in used
        used |= {r, s}
        old = comp[r.vertex]
        comp = {v: comp[s.vertex] if c == old else c for v, c in comp.items()}
        assert tree.parent_of(r.vertex) == s.vertex
        assert tree.step[r.vertex - 1] == k and tree.half_edge[r.vertex - 1] == s.index
    assert len(set(comp.values())) == 1
    assert all(c <= deg - 1 for c, deg in zip(tree.child_sequence(), d))


def test_conditionally_uniform_given_child_sequence():
    d = (3, 3, 2, 2, 1)
    by_c: dict = {}
    for p in pitman_parents(d, 30_000, RandomSource(3)):
        t = RootedTree(p, validate=False)
        by_c.setdefault(t.child_sequence(), Counter())[t.key()] += 1
    c, hist = max(by_c.items(), key=lambda kv: sum(kv[1].values()))
    assert len(hist) == theory.tree_count(c)
    assert stats.chisquare(list(hist.values())).pvalue > 0.001


def test_half_edge_set_is_uniform_subset():
    d = DegreeSequence((3, 3, 2, 2, 1, 1))
    reps = 8000
    gen = RandomSource(4).generator()
    counts = Counter()
    for _ in range(reps):
        _, trace = pitman_sample(d, gen)
        counts.update(s for _, s in trace)
    p = (d.n - 1) / (d.twice_m - d.n)
    se = np.sqrt(p * (1 - p) / reps)
    for h in d.non_root_half_edges():
        assert abs(counts[h] / reps - p) < 3.5 * se


def test_step_labelling_uniform_at_three_vertices():
    counts = Counter()
    gen = RandomSource(5).generator()
    for _ in range(10_000):
        tree, _ = pitman_sample([3, 1, 1], gen)
        counts[tuple(tree.step.tolist())] += 1
    assert set(counts) == {(0, 1, 2), (0, 2, 1)}
    assert stats.chisquare(list(counts.values())).pvalue > 0.001


def test_pitman_parents_matches_pitman_sample():
    rows = pitman_parents([3, 2, 2, 1], 3, RandomSource(9))
    tree, _ = pitman_sample([3, 2, 2, 1], RandomSource(9))
    assert rows[0].tolist() == tree.parent.tolist()


def test_invalid_sequences_rejected():
    with pytest.raises(DegreeTooSmall):
        pitman_sample([2, 0, 2])
    with pytest.raises(InvalidDegreeSequence):
        tree_weighted_sample([4])
    with pytest.raises(OddSum):
        configuration_model_sample([2, 1])
    with pytest.raises(OddCount):
        uniform_matching([HalfEdge(1, 1)])


def test_uniform_matching_small():
    two = [HalfEdge(1, 1), HalfEdge(2, 1)]
    assert uniform_matching(two, 0).pairs == ((two[0], two[1]),)
    four = [HalfEdge(1, i) for i in range(1, 5)]
    gen = RandomSource(6).generator()
    counts = Counter(uniform_matching(four, gen) for _ in range(30_000))
    assert len(counts) == 3 and all(abs(c / 30_000 - 1 / 3) < 0.02 for c in counts.values())
    six = [HalfEdge(1, i) for i in range(1, 7)]
    counts = Counter(uniform_matching(six, gen) for _ in range(30_000))
    assert len(counts) == 15 and stats.chisquare(list(counts.values())).pvalue > 0.001


def test_configuration_model_small():
    assert configuration_model_sample([1, 1], 0) == Multigraph(2, {(1, 2): 1})
    assert configuration_model_sample([2], 0) == Multigraph(1, {(1, 1): 1})
    gen = RandomSource(7).generator()
    counts = Counter(configuration_model_sample([2, 2, 2], gen).key() for _ in range(20_000))
    exact = oracle.exact_cm_distribution([2, 2, 2])
    assert distribution_distances(counts, {k: float(p) for k, p in exact.items()}).tv < 0.02


def test_tree_weighted_two_vertices():
    gen = RandomSource(8).generator()
    roots = Counter()
    for _ in range(10_000):
        x = tree_weighted_sample([2, 2], gen)
        assert x.G == Multigraph(2, {(1, 2): 2})
        roots[x.T.root] += 1
    assert abs(roots[1] / 10_000 - 0.5) < 0.02


@given(degree_sequences(max_n=7, tree_weighted=True), st.integers(0, 2**32))
def test_tree_weighted_structure(degrees, seed):
    d = DegreeSequence(degrees)
    x = tree_weighted_sample(d, RandomSource(seed))
    assert x.G.degrees == d.degrees
    assert x.gamma_head == HalfEdge(x.T.root, d[x.T.root])
    assert x.matching.partner(x.gamma_head) == x.gamma_tail
    assert x.rest == x.matching.to_multigraph(d.n)
    fast = sample_pendant_pairs(plan_coalescent(d), RandomSource(seed).generator())
    assert fast.root + 1 == x.T.root
    assert (fast.parent + 1).tolist() == x.T.parent.tolist()
    pairs = list(zip((fast.a + 1).tolist(), (fast.b + 1).tolist()))
    assert Multigraph.from_pairs(d.n, pairs) == x.rest
    assert pairs[fast.gamma] == x.gamma


def test_samplers_are_deterministic():
    d = (3, 3, 2, 2, 2)
    assert pitman_sample(d, RandomSource(11)) == pitman_sample(d, RandomSource(11))
    assert tree_weighted_sample(d, RandomSource(11)) == tree_weighted_sample(d, RandomSource(11))
    assert configuration_model_sample(d[:4], RandomSource(11)) == configuration_model_sample(
        d[:4], RandomSource(11)
    )
