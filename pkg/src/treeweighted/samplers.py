"""Random constructions: the fixed-degree additive coalescent, uniform
half-edge matchings (configuration model) and tree-weighted graphs.

Randomness always comes from a :class:`numpy.random.Generator`.  A
:class:`RandomSource` names a reproducible PCG64 stream by ``(seed,
stream)``; passing the same source twice reproduces the same draw, while
passing a live ``Generator`` advances it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .core import (
    DegreeSequence,
    HalfEdge,
    Matching,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
    as_degree_sequence,
    validate_for_tree_sampling,
    validate_for_tree_weighted,
)
from .errors import OddCount, OddSum

BIT_GENERATOR = "PCG64"


@dataclass(frozen=True)
class RandomSource:
    """Reproducible random stream ``(seed, stream)``.

    Streams with different ids are spawned children of the same
    :class:`numpy.random.SeedSequence` and are statistically independent.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def describe(self) -> dict:
        return {
            "bit_generator": BIT_GENERATOR,
            "seed": self.seed,
            "stream": self.stream,
            "numpy": np.__version__,
        }


RNGLike = RandomSource | np.random.Generator | int | None


def as_generator(rng: RNGLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RandomSource):
        return rng.generator()
    return RandomSource(0 if rng is None else int(rng)).generator()


class CoalescentPlan(NamedTuple):
    """Precomputed half-edge tables for repeated coalescent runs on one ``d``."""

    d: DegreeSequence
    he_vertex: np.ndarray  # 0-based vertex of each non-root half-edge
    he_index: np.ndarray  # its 1-based index at that vertex
    highs: np.ndarray  # exclusive upper bounds of the 2(n-1) integer draws


def plan_coalescent(d: DegreeSequence | Sequence[int]) -> CoalescentPlan:
    d = validate_for_tree_sampling(d)
    n = d.n
    deg = d.array
    he_vertex = np.repeat(np.arange(n, dtype=np.int64), deg - 1)
    starts = np.repeat(np.cumsum(deg - 1) - (deg - 1), deg - 1)
    he_index = np.arange(he_vertex.size, dtype=np.int64) - starts + 1
    k = np.arange(n - 1, dtype=np.int64)
    s_high = d.twice_m - n - k  # unpaired non-root half-edges at step k+1
    r_high = n - 1 - k  # roots outside the chosen half-edge's tree
    return CoalescentPlan(d, he_vertex, he_index, np.concatenate([s_high, r_high]))


class CoalescentRun(NamedTuple):
    """Raw output of one coalescent run (0-based vertices).

    ``child[k]`` is the vertex whose root half-edge was paired at step
    ``k+1`` and ``s_half_edge[k]`` the id (row of the plan tables) of the
    non-root half-edge it was paired with.
    """

    child: np.ndarray
    s_half_edge: np.ndarray


def run_coalescent(plan: CoalescentPlan, rng: np.random.Generator) -> CoalescentRun:
    n = plan.d.n
    draws = rng.integers(0, plan.highs) if n > 1 else np.empty(0, np.int64)
    child = np.empty(n - 1, np.int64)
    s_he = np.empty(n - 1, np.int64)
    _kernels.coalesce(plan.he_vertex, n, draws[: n - 1], draws[n - 1 :], child, s_he)
    return CoalescentRun(child, s_he)


def parent_array(plan: CoalescentPlan, run: CoalescentRun) -> np.ndarray:
    """0-based parent array, ``-1`` at the root."""
    parent = np.full(plan.d.n, -1, np.int64)
    parent[run.child] = plan.he_vertex[run.s_half_edge]
    return parent


def run_to_tree(plan: CoalescentPlan, run: CoalescentRun) -> RootedTree:
    n = plan.d.n
    parent = np.zeros(n, np.int64)
    step = np.zeros(n, np.int64)
    half = np.zeros(n, np.int64)
    parent[run.child] = plan.he_vertex[run.s_half_edge] + 1
    step[run.child] = np.arange(1, n)
    half[run.child] = plan.he_index[run.s_half_edge]
    return RootedTree(parent, step, half, validate=False)


def run_to_trace(plan: CoalescentPlan, run: CoalescentRun) -> list[tuple[HalfEdge, HalfEdge]]:
    deg = plan.d.degrees
    return [
        (
            HalfEdge(int(c) + 1, deg[c]),
            HalfEdge(int(plan.he_vertex[h]) + 1, int(plan.he_index[h])),
        )
        for c, h in zip(run.child.tolist(), run.s_half_edge.tolist())
    ]


def pitman_sample(
    d: DegreeSequence | Sequence[int], rng: RNGLike = None
) -> tuple[RootedTree, list[tuple[HalfEdge, HalfEdge]]]:
    """Sample a tree ``T(d)`` together with its execution path.

    The returned tree carries the step labelling K and the half-edge
    labelling H; the trace lists ``(r_k, s_k)`` for ``k = 1..n-1``.
    """
    plan = plan_coalescent(d)
    run = run_coalescent(plan, as_generator(rng))
    return run_to_tree(plan, run), run_to_trace(plan, run)


def pitman_parents(
    d: DegreeSequence | Sequence[int], reps: int, rng: RNGLike = None
) -> np.ndarray:
    """``reps`` independent trees as rows of 1-based parent arrays (0 = root)."""
    plan = plan_coalescent(d)
    gen = as_generator(rng)
    out = np.zeros((reps, plan.d.n), np.int64)
    for i in range(reps):
        run = run_coalescent(plan, gen)
        out[i, run.child] = plan.he_vertex[run.s_half_edge] + 1
    return out


def uniform_matching(halfedges: Sequence[HalfEdge], rng: RNGLike = None) -> Matching:
    """Uniform perfect matching by shuffling and pairing consecutive slots."""
    if len(halfedges) % 2:
        raise OddCount(f"cannot perfectly match {len(halfedges)} half-edges")
    perm = as_generator(rng).permutation(len(halfedges))
    items = [halfedges[i] for i in perm]
    return Matching(tuple(zip(items[0::2], items[1::2])))


def configuration_model_sample(
    d: DegreeSequence | Sequence[int], rng: RNGLike = None
) -> Multigraph:
    d = as_degree_sequence(d)
    if d.twice_m % 2:
        raise OddSum(f"sum of degrees {d.twice_m} is odd")
    return uniform_matching(d.half_edges(), rng).to_multigraph(d.n)


def configuration_model_pairs(
    degrees: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Vertex endpoints (0-based) of a uniform matching of all half-edges."""
    stubs = np.repeat(np.arange(degrees.size, dtype=np.int64), degrees)
    if stubs.size % 2:
        raise OddCount(f"cannot perfectly match {stubs.size} half-edges")
    stubs = stubs[rng.permutation(stubs.size)]
    return stubs[0::2], stubs[1::2]


class PendantPairs(NamedTuple):
    """Array form of a sampled tree-rooted graph (0-based vertices).

    ``parent`` is the tree (``-1`` at ``root``); ``a[i]``--``b[i]`` are the
    non-tree edges from matching the pendant half-edges, and the root edge
    is pair ``gamma``, with ``a[gamma] == root``.
    """

    parent: np.ndarray
    root: int
    a: np.ndarray
    b: np.ndarray
    gamma: int


def _pendant_half_edges(plan: CoalescentPlan, run: CoalescentRun) -> tuple[np.ndarray, np.ndarray]:
    used = np.zeros(plan.he_vertex.size, bool)
    used[run.s_half_edge] = True
    is_root = np.ones(plan.d.n, bool)
    is_root[run.child] = False
    root = int(np.flatnonzero(is_root)[0])
    verts = np.concatenate([[root], plan.he_vertex[~used]])
    idx = np.concatenate([[plan.d.degrees[root]], plan.he_index[~used]])
    return verts, idx


def _match_pendants(plan: CoalescentPlan, run: CoalescentRun, gen: np.random.Generator):
    verts, idx = _pendant_half_edges(plan, run)
    perm = gen.permutation(verts.size)
    slot = int(np.flatnonzero(perm == 0)[0])  # where the root half-edge landed
    return verts, idx, perm, slot


def sample_pendant_pairs(plan: CoalescentPlan, rng: np.random.Generator) -> PendantPairs:
    """Fast path of :func:`tree_weighted_sample` without building objects."""
    run = run_coalescent(plan, rng)
    verts, _, perm, slot = _match_pendants(plan, run, rng)
    ends = verts[perm]
    a, b = ends[0::2].copy(), ends[1::2].copy()
    gamma = slot // 2
    if slot % 2:
        a[gamma], b[gamma] = b[gamma], a[gamma]
    root = int(verts[0])
    return PendantPairs(parent_array(plan, run), root, a, b, gamma)


def tree_weighted_sample(
    d: DegreeSequence | Sequence[int], rng: RNGLike = None
) -> TreeRootedGraph:
    """Sample ``(G, T, Gamma)``: coalescent tree plus a uniform matching of
    the half-edges it leaves pendant; ``Gamma`` contains the tree's root
    half-edge at its head."""
    d = validate_for_tree_weighted(d)
    plan = plan_coalescent(d)
    gen = as_generator(rng)
    run = run_coalescent(plan, gen)
    tree = run_to_tree(plan, run)
    verts, idx, perm, slot = _match_pendants(plan, run, gen)
    items = [HalfEdge(int(verts[i]) + 1, int(idx[i])) for i in perm]
    pairs = tuple(zip(items[0::2], items[1::2]))
    head = items[slot]
    tail = items[slot ^ 1]
    matching = Matching(pairs)
    graph = Multigraph.from_pairs(
        d.n, [(c, p) for c, p in tree.edges()] + [(x.vertex, y.vertex) for x, y in pairs]
    )
    return TreeRootedGraph(graph, tree, head, tail, matching)
