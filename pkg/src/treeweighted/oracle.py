"""Brute-force enumeration at tiny scale.

Everything here is computed straight from the definitions, never from the
closed forms in :mod:`treeweighted.theory`, so the two can be compared.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

from .core import (
    DegreeSequence,
    Edge,
    HalfEdge,
    Matching,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
    as_degree_sequence,
    edge_key,
    validate_for_tree_sampling,
    validate_for_tree_weighted,
)
from .errors import OddCount, TooLarge
from .statistics import ConflictCounts, _host_set
from .theory import execution_path_count

PATH_LIMIT = 10**6
MATCHING_LIMIT = 12  # half-edges

Trace = tuple[tuple[HalfEdge, HalfEdge], ...]


@dataclass
class ExactDistribution:
    """Exact law over canonical keys, with one representative object per key."""

    probs: dict[Hashable, Fraction]
    objects: dict[Hashable, object] = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.probs.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, key) -> Fraction:
        return self.probs.get(key, Fraction(0))

    def __len__(self) -> int:
        return len(self.probs)

    def items(self):
        return self.probs.items()

    def marginal(self, fn) -> dict[Hashable, Fraction]:
        out: dict[Hashable, Fraction] = defaultdict(Fraction)
        for key, p in self.probs.items():
            out[fn(key)] += p
        return dict(out)


def _from_counts(counts: dict, objects: dict) -> ExactDistribution:
    total = sum(counts.values())
    return ExactDistribution({k: Fraction(c, total) for k, c in counts.items()}, objects)


def enumerate_execution_paths(
    d: DegreeSequence | Sequence[int], limit: int = PATH_LIMIT
) -> list[Trace]:
    """Every sequence of ``(r_k, s_k)`` pairs the coalescent can produce."""
    d = validate_for_tree_sampling(d)
    if execution_path_count(d) > limit:
        raise TooLarge(f"more than {limit} execution paths for {d}")
    n = d.n
    roots = [HalfEdge(v, d[v]) for v in range(1, n + 1)]
    non_roots = d.non_root_half_edges()
    paths: list[Trace] = []

    def extend(prefix, comp, paired):
        if len(prefix) == n - 1:
            paths.append(tuple(prefix))
            return
        for r in roots:
            if r in paired:
                continue
            for s in non_roots:
                if s in paired or comp[s.vertex] == comp[r.vertex]:
                    continue
                old, new = comp[r.vertex], comp[s.vertex]
                merged = {v: (new if c == old else c) for v, c in comp.items()}
                prefix.append((r, s))
                extend(prefix, merged, paired | {r, s})
                prefix.pop()

    extend([], {v: v for v in range(1, n + 1)}, frozenset())
    return paths


def path_to_tree(d: DegreeSequence, path: Trace) -> RootedTree:
    """Tree with labellings K and H induced by an execution path."""
    n = d.n
    parent = [0] * n
    step = [0] * n
    half = [0] * n
    for k, (r, s) in enumerate(path, start=1):
        parent[r.vertex - 1] = s.vertex
        step[r.vertex - 1] = k
        half[r.vertex - 1] = s.index
    return RootedTree(parent, step, half)


def exact_tree_distribution(
    d: DegreeSequence | Sequence[int], limit: int = PATH_LIMIT
) -> ExactDistribution:
    """Law of the coalescent tree: each execution path is equally likely."""
    d = as_degree_sequence(d)
    counts: dict = defaultdict(int)
    objects = {}
    for path in enumerate_execution_paths(d, limit):
        t = path_to_tree(d, path)
        counts[t.key()] += 1
        objects.setdefault(t.key(), RootedTree(t.parent))
    return _from_counts(counts, objects)


def enumerate_rooted_trees(n: int) -> list[RootedTree]:
    """All ``n^(n-1)`` rooted labelled trees on ``[n]`` (parent maps without cycles)."""
    if n > 7:
        raise TooLarge("rooted-tree enumeration is capped at n = 7")
    out = []
    for root in range(1, n + 1):
        others = [v for v in range(1, n + 1) if v != root]
        for choice in itertools.product(range(1, n + 1), repeat=n - 1):
            parent = [0] * n
            for v, p in zip(others, choice):
                parent[v - 1] = p
            if _reaches_root(parent, root):
                out.append(RootedTree(parent, validate=False))
    return out


def _reaches_root(parent: list[int], root: int) -> bool:
    n = len(parent)
    for v in range(1, n + 1):
        seen = 0
        while v != root:
            v = parent[v - 1]
            seen += 1
            if v == 0 or seen > n:
                return False
    return True


def enumerate_matchings(
    halfedges: Sequence[HalfEdge], limit: int = MATCHING_LIMIT
) -> list[Matching]:
    """All ``(2k-1)!!`` perfect matchings of ``halfedges``."""
    if len(halfedges) % 2:
        raise OddCount(f"cannot perfectly match {len(halfedges)} half-edges")
    if len(halfedges) > limit:
        raise TooLarge(f"matching enumeration capped at {limit} half-edges")

    def rec(items):
        if not items:
            yield ()
            return
        first, rest = items[0], items[1:]
        for j, other in enumerate(rest):
            for tail in rec(rest[:j] + rest[j + 1 :]):
                yield ((first, other),) + tail

    return [Matching(pairs) for pairs in rec(list(halfedges))]


def exact_cm_distribution(
    d: DegreeSequence | Sequence[int], limit: int = MATCHING_LIMIT
) -> ExactDistribution:
    d = as_degree_sequence(d)
    counts: dict = defaultdict(int)
    objects = {}
    for mt in enumerate_matchings(d.half_edges(), limit):
        g = mt.to_multigraph(d.n)
        counts[g.key()] += 1
        objects.setdefault(g.key(), g)
    return _from_counts(counts, objects)


def exact_twg_distribution(
    d: DegreeSequence | Sequence[int], limit: int = PATH_LIMIT
) -> ExactDistribution:
    """Law of ``(G, T, Gamma)`` over all execution paths times pendant matchings."""
    d = validate_for_tree_weighted(d)
    pendant = d.twice_m - 2 * (d.n - 1)
    n_match = 1
    for j in range(pendant - 1, 0, -2):
        n_match *= j
    if execution_path_count(d) * n_match > limit:
        raise TooLarge(f"more than {limit} outcomes for {d}")
    counts: dict = defaultdict(int)
    objects = {}
    for path in enumerate_execution_paths(d, limit):
        tree = path_to_tree(d, path)
        used = {h for pair in path for h in pair}
        free = [h for h in d.half_edges() if h not in used]
        head = HalfEdge(tree.root, d[tree.root])
        tree_pairs = [(r.vertex, s.vertex) for r, s in path]
        for mt in enumerate_matchings(free, limit=pendant):
            g = Multigraph.from_pairs(
                d.n, tree_pairs + [(a.vertex, b.vertex) for a, b in mt.pairs]
            )
            x = TreeRootedGraph(g, tree, head, mt.partner(head), mt)
            counts[x.key()] += 1
            objects.setdefault(x.key(), x)
    return _from_counts(counts, objects)


def enumerate_tree_rooted_graphs(d: DegreeSequence | Sequence[int]) -> list[TreeRootedGraph]:
    """Every tree-rooted graph with degree sequence ``d``, one per key."""
    d = validate_for_tree_weighted(d)
    n = d.n
    graphs = {mt.to_multigraph(n) for mt in enumerate_matchings(d.half_edges(), limit=d.twice_m)}
    out = []
    for g in sorted(graphs, key=Multigraph.key):
        support = [(u, v) for u, v, _ in g.edges() if u != v]
        for tree_edges in itertools.combinations(support, n - 1):
            if not _spans(n, tree_edges):
                continue
            rest = dict(g.mult)
            for e in tree_edges:
                rest[e] -= 1
            for (u, v), m in rest.items():
                if m < 1:
                    continue
                for head, tail in {(u, v), (v, u)}:
                    t = RootedTree.from_undirected(n, tree_edges, head)
                    out.append(TreeRootedGraph(g, t, HalfEdge(head, d[head]), HalfEdge(tail, 1)))
    return out


def _spans(n: int, edges: Iterable[Edge]) -> bool:
    comp = list(range(n + 1))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    merged = 0
    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            return False
        comp[a] = b
        merged += 1
    return merged == n - 1


def conflict_counts_by_definition(
    matching: Matching, d: DegreeSequence, h: Iterable[Edge]
) -> ConflictCounts:
    """``(L, M, N)`` by summing indicators over the index sets directly."""
    host = _host_set(h)
    matched = {frozenset(p) for p in matching.pairs}

    def hit(x: HalfEdge, y: HalfEdge) -> bool:
        return frozenset((x, y)) in matched

    n = d.n
    L = sum(
        hit(HalfEdge(u, i), HalfEdge(u, j))
        for u in range(1, n + 1)
        for i in range(1, d[u] + 1)
        for j in range(i + 1, d[u] + 1)
    )
    M = 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) in host:
                continue
            for i1 in range(1, d[u] + 1):
                for i2 in range(i1 + 1, d[u] + 1):
                    for j1 in range(1, d[v] + 1):
                        for j2 in range(1, d[v] + 1):
                            if j1 != j2:
                                M += hit(HalfEdge(u, i1), HalfEdge(v, j1)) and hit(
                                    HalfEdge(u, i2), HalfEdge(v, j2)
                                )
    N = sum(
        hit(HalfEdge(u, i), HalfEdge(v, j))
        for u, v in host
        for i in range(1, d[u] + 1)
        for j in range(1, d[v] + 1)
    )
    return ConflictCounts(L, M, N)


def exact_conflict_distribution(
    d_minus: DegreeSequence | Sequence[int], h: Iterable[Edge] = (), limit: int = MATCHING_LIMIT
) -> ExactDistribution:
    """Exact joint law of ``(L, M, N)`` over all matchings of ``d_minus``."""
    d = as_degree_sequence(d_minus)
    host = sorted(_host_set(h))
    counts: dict = defaultdict(int)
    for mt in enumerate_matchings(d.half_edges(), limit):
        counts[tuple(conflict_counts_by_definition(mt, d, host))] += 1
    return _from_counts(counts, {})


def exact_conflict_moments(
    d_minus: DegreeSequence | Sequence[int],
    hosts: Iterable[Iterable[Edge]],
    limit: int = MATCHING_LIMIT,
) -> dict[tuple[Edge, ...], tuple[Fraction, Fraction, Fraction]]:
    """Exact ``(E[L], E[M], E[N])`` for many host graphs at once.

    Each matching is scored once per vertex pair (matched pairs across it
    and index pairs ``i1 < i2, j1 != j2`` of parallel matched edges), after
    which every host is a sum over its own edges.
    """
    d = as_degree_sequence(d_minus)
    n = d.n
    col = {e: i for i, e in enumerate((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1))}
    matchings = enumerate_matchings(d.half_edges(), limit)
    loops = np.zeros(len(matchings), np.int64)
    cross = np.zeros((len(matchings), len(col)), np.int64)
    multi = np.zeros((len(matchings), len(col)), np.int64)
    for row, mt in enumerate(matchings):
        between: dict[Edge, list[tuple[int, int]]] = defaultdict(list)
        for x, y in mt.pairs:
            if x.vertex == y.vertex:
                loops[row] += 1
            else:
                between[(x.vertex, y.vertex)].append((x.index, y.index))
        for e, ends in between.items():
            cross[row, col[e]] = len(ends)
            multi[row, col[e]] = sum(i1 < i2 and j1 != j2 for i1, j1 in ends for i2, j2 in ends)
    total = len(matchings)
    out = {}
    for h in hosts:
        host = tuple(sorted(_host_set(h)))
        on = np.zeros(len(col), bool)
        on[[col[e] for e in host]] = True
        out[host] = (
            Fraction(int(loops.sum()), total),
            Fraction(int(multi[:, ~on].sum()), total),
            Fraction(int(cross[:, on].sum()), total),
        )
    return out


def paths_grouped_by_half_edge_set(paths: Iterable[Trace]) -> dict[frozenset, list[Trace]]:
    groups: dict[frozenset, list[Trace]] = defaultdict(list)
    for path in paths:
        groups[frozenset(s for _, s in path)].append(path)
    return dict(groups)


def degree_sequences(max_n: int, max_sum: int, min_degree: int = 1) -> Iterable[DegreeSequence]:
    """All degree sequences with ``n <= max_n`` and total at most ``max_sum``."""
    for n in range(1, max_n + 1):
        for degs in itertools.product(range(min_degree, max_sum + 1), repeat=n):
            if sum(degs) <= max_sum:
                yield DegreeSequence(degs)


def simple_graphs(n: int) -> Iterable[tuple[Edge, ...]]:
    pairs = [edge_key(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    for r in range(len(pairs) + 1):
        yield from itertools.combinations(pairs, r)
