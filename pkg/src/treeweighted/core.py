"""Domain types: degree sequences, half-edges, rooted trees, multigraphs.

Vertices are the integers ``1..n``.  Vertex ``v`` carries half-edges
``(v, 1), ..., (v, d(v))``; the last one, ``(v, d(v))``, is its root
half-edge.  Unordered vertex pairs are stored as ``(min, max)``; a loop at
``v`` is ``(v, v)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    DegreeTooSmall,
    InvalidDegreeSequence,
    InvalidTree,
    NotAChildSequence,
    OddSum,
    SumTooSmall,
    TreeEdgeMissing,
)

Edge = tuple[int, int]
ChildSequence = tuple[int, ...]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


def falling_factorial(x: int, l: int) -> int:
    """``x (x-1) ... (x-l+1)``, with ``(x)_0 = 1`` and ``(x)_l = 0`` for ``l < 0``."""
    if l < 0:
        return 0
    if l == 0:
        return 1
    if 0 <= x < l:
        return 0
    out = 1
    for j in range(l):
        out *= x - j
    return out


class HalfEdge(NamedTuple):
    vertex: int
    index: int

    def is_root(self, d: "DegreeSequence") -> bool:
        return self.index == d[self.vertex]

    def __str__(self) -> str:
        return f"{self.vertex}.{self.index}"


@dataclass(frozen=True)
class DegreeSequence:
    """Degrees ``d(1), ..., d(n)``.

    Zero degrees are representable (the leftover degrees of a graph minus a
    spanning tree can vanish); the sampling validators reject them.
    """

    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(x) for x in self.degrees)
        if not degs:
            raise InvalidDegreeSequence("degree sequence must be non-empty")
        if any(x < 0 for x in degs):
            raise InvalidDegreeSequence("degrees must be non-negative")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def of(cls, degrees: Iterable[int]) -> "DegreeSequence":
        return cls(tuple(degrees))

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def twice_m(self) -> int:
        """The half-edge count ``2m = sum d(i)`` (kept integral even when odd)."""
        return sum(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __getitem__(self, vertex: int) -> int:
        if not 1 <= vertex <= self.n:
            raise IndexError(f"vertex {vertex} outside 1..{self.n}")
        return self.degrees[vertex - 1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.degrees)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.degrees, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    def half_edges(self) -> list[HalfEdge]:
        return [HalfEdge(v, i) for v in range(1, self.n + 1) for i in range(1, self[v] + 1)]

    def non_root_half_edges(self) -> list[HalfEdge]:
        return [HalfEdge(v, i) for v in range(1, self.n + 1) for i in range(1, self[v])]

    def distribution(self) -> "DegreeDistribution":
        return DegreeDistribution.from_degrees(self)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.degrees)) + ")"


@dataclass(frozen=True)
class DegreeDistribution:
    """Probability mass function on the non-negative integers."""

    p: Mapping[int, float]

    def __post_init__(self):
        items = {int(k): v for k, v in dict(self.p).items() if v != 0}
        if any(k < 0 for k in items):
            raise ValueError("support must be non-negative integers")
        if any(v < 0 for v in items.values()):
            raise ValueError("probabilities must be non-negative")
        total = sum(items.values())
        if abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {float(total)!r}, not 1")
        object.__setattr__(self, "p", MappingProxyType(dict(sorted(items.items()))))

    @classmethod
    def from_degrees(cls, d: DegreeSequence | Iterable[int]) -> "DegreeDistribution":
        counts = Counter(d)
        n = sum(counts.values())
        return cls({k: c / n for k, c in counts.items()})

    @classmethod
    def point_mass(cls, k: int) -> "DegreeDistribution":
        return cls({k: 1.0})

    def __getitem__(self, k: int) -> float:
        return self.p.get(k, 0.0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.p)

    @property
    def max_support(self) -> int:
        return max(self.p)

    def moment(self, order: int) -> float:
        return sum(k**order * v for k, v in self.p.items())

    @property
    def mu1(self) -> float:
        return self.moment(1)

    @property
    def mu2(self) -> float:
        return self.moment(2)


class RootedTree:
    """Rooted tree on ``1..n`` stored as a parent array.

    ``parent[v-1]`` is the parent of ``v`` (``0`` for the root).  Each edge is
    identified with its child endpoint.  ``step[v-1]`` (edge labelling K) is
    the coalescent step that created the edge above ``v`` and
    ``half_edge[v-1]`` (labelling H) is the index of the non-root half-edge
    of ``parent(v)`` used by it; both are ``0`` at the root and both are
    optional.
    """

    __slots__ = ("_parent", "_root", "_step", "_half_edge", "__dict__")

    def __init__(
        self,
        parent: Sequence[int] | np.ndarray,
        step: Sequence[int] | np.ndarray | None = None,
        half_edge: Sequence[int] | np.ndarray | None = None,
        *,
        validate: bool = True,
    ):
        par = np.array(parent, dtype=np.int64)
        if par.ndim != 1 or par.size == 0:
            raise InvalidTree("parent array must be one-dimensional and non-empty")
        roots = np.flatnonzero(par == 0)
        if roots.size != 1:
            raise InvalidTree(f"expected exactly one root, found {roots.size}")
        self._root = int(roots[0]) + 1
        par.flags.writeable = False
        self._parent = par
        self._step = _frozen_labels(step, par.size, "step")
        self._half_edge = _frozen_labels(half_edge, par.size, "half_edge")
        if validate:
            self._validate()

    def _validate(self) -> None:
        n = self.n
        par = self._parent
        if par.min() < 0 or par.max() > n:
            raise InvalidTree("parent ids outside 1..n")
        if np.any(par == np.arange(1, n + 1)):
            raise InvalidTree("a vertex cannot be its own parent")
        self.depths()  # raises on cycles
        if self._step is not None:
            steps = np.delete(self._step, self._root - 1)
            if sorted(steps.tolist()) != list(range(1, n)):
                raise InvalidTree("step labelling must be a bijection onto 1..n-1")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], root: int
    ) -> "RootedTree":
        """Build from ``(child, parent)`` pairs."""
        parent = [0] * n
        seen = set()
        for child, par in edges:
            if child in seen:
                raise InvalidTree(f"vertex {child} has two parents")
            seen.add(child)
            parent[child - 1] = par
        if root in seen or len(seen) != n - 1:
            raise InvalidTree("edges must give every non-root vertex exactly one parent")
        return cls(parent)

    @classmethod
    def from_undirected(cls, n: int, edges: Iterable[Edge], root: int) -> "RootedTree":
        """Orient an unrooted spanning tree away from ``root``."""
        adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        count = 0
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != n - 1:
            raise InvalidTree("a spanning tree on n vertices has n-1 edges")
        parent = [0] * n
        seen = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w - 1] = u
                    stack.append(w)
        if len(seen) != n:
            raise InvalidTree("edges do not span the vertex set")
        return cls(parent)

    @property
    def n(self) -> int:
        return self._parent.size

    @property
    def root(self) -> int:
        return self._root

    @property
    def parent(self) -> np.ndarray:
        return self._parent

    @property
    def step(self) -> np.ndarray | None:
        return self._step

    @property
    def half_edge(self) -> np.ndarray | None:
        return self._half_edge

    def parent_of(self, v: int) -> int | None:
        p = int(self._parent[v - 1])
        return p or None

    def edges(self) -> list[tuple[int, int]]:
        """``(child, parent)`` pairs ordered by child."""
        return [(i + 1, int(p)) for i, p in enumerate(self._parent) if p]

    def undirected_edges(self) -> list[Edge]:
        return [edge_key(c, p) for c, p in self.edges()]

    @cached_property
    def child_counts(self) -> np.ndarray:
        c = np.bincount(self._parent, minlength=self.n + 1)[1:]
        c.flags.writeable = False
        return c

    def child_sequence(self) -> ChildSequence:
        return tuple(int(x) for x in self.child_counts)

    def depths(self) -> np.ndarray:
        """Depth of every vertex (root at depth 0)."""
        if "_depths" in self.__dict__:
            return self.__dict__["_depths"]
        n = self.n
        par = self._parent
        depth = np.full(n, -1, dtype=np.int64)
        depth[self._root - 1] = 0
        for start in range(n):
            path = []
            v = start
            while depth[v] < 0:
                path.append(v)
                v = par[v] - 1
                if len(path) > n:
                    raise InvalidTree("parent map contains a cycle")
            base = depth[v]
            for j, w in enumerate(reversed(path), start=1):
                depth[w] = base + j
        depth.flags.writeable = False
        self.__dict__["_depths"] = depth
        return depth

    def key(self) -> tuple:
        """Canonical hashable encoding (ignores the K and H labellings)."""
        return (self._root, tuple(self._parent.tolist()))

    def labelled_key(self) -> tuple:
        step = None if self._step is None else tuple(self._step.tolist())
        half = None if self._half_edge is None else tuple(self._half_edge.tolist())
        return self.key() + (step, half)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedTree) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"RootedTree(root={self._root}, edges={self.edges()})"


def _frozen_labels(values, n: int, name: str) -> np.ndarray | None:
    if values is None:
        return None
    arr = np.array(values, dtype=np.int64)
    if arr.shape != (n,):
        raise InvalidTree(f"{name} labelling must have length n")
    arr.flags.writeable = False
    return arr


class Multigraph:
    """Multigraph on ``1..n`` given by a multiplicity map over ``(u, v)``, ``u <= v``."""

    __slots__ = ("_n", "_mult", "__dict__")

    def __init__(self, n: int, mult: Mapping[Edge, int] | Iterable[tuple[Edge, int]] = ()):
        items = mult.items() if isinstance(mult, Mapping) else mult
        clean: dict[Edge, int] = {}
        for (u, v), m in items:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {(u, v)} outside 1..{n}")
            if m < 0:
                raise ValueError("multiplicities must be non-negative")
            if m:
                e = edge_key(int(u), int(v))
                clean[e] = clean.get(e, 0) + int(m)
        self._n = int(n)
        self._mult = MappingProxyType(dict(sorted(clean.items())))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Multigraph":
        return cls(n, Counter(edge_key(u, v) for u, v in pairs))

    @property
    def n(self) -> int:
        return self._n

    @property
    def mult(self) -> Mapping[Edge, int]:
        return self._mult

    def multiplicity(self, u: int, v: int) -> int:
        return self._mult.get(edge_key(u, v), 0)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, m) for (u, v), m in self._mult.items()]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * (self._n + 1)
        for (u, v), m in self._mult.items():
            deg[u] += m
            deg[v] += m
        return tuple(deg[1:])

    def degree(self, v: int) -> int:
        return self.degrees[v - 1]

    @property
    def total_multiplicity(self) -> int:
        return sum(self._mult.values())

    def is_simple(self) -> bool:
        return all(m == 1 and u != v for (u, v), m in self._mult.items())

    def union(self, other: "Multigraph") -> "Multigraph":
        if other.n != self._n:
            raise ValueError("vertex sets differ")
        merged = Counter(self._mult)
        merged.update(other.mult)
        return Multigraph(self._n, merged)

    def key(self) -> tuple:
        return (self._n, tuple(self.edges()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Multigraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Multigraph(n={self._n}, edges={self.edges()})"


@dataclass(frozen=True)
class Matching:
    """Perfect matching of half-edges; each pair and the pair list are sorted."""

    pairs: tuple[tuple[HalfEdge, HalfEdge], ...]

    def __post_init__(self):
        canon = tuple(sorted(tuple(sorted((HalfEdge(*a), HalfEdge(*b)))) for a, b in self.pairs))
        object.__setattr__(self, "pairs", canon)

    def partner(self, h: HalfEdge) -> HalfEdge:
        for a, b in self.pairs:
            if a == h:
                return b
            if b == h:
                return a
        raise KeyError(h)

    def to_multigraph(self, n: int) -> Multigraph:
        return Multigraph.from_pairs(n, ((a.vertex, b.vertex) for a, b in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class TreeRootedGraph:
    """A multigraph ``G`` with spanning tree ``T`` and oriented root edge.

    The root edge runs from ``gamma_head`` (the root half-edge of ``T``'s
    root) to ``gamma_tail``.  ``matching`` optionally records how the
    half-edges left over by the tree were paired.
    """

    G: Multigraph
    T: RootedTree
    gamma_head: HalfEdge
    gamma_tail: HalfEdge
    matching: Matching | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.G.n != self.T.n:
            raise ValueError("graph and tree have different vertex counts")
        if self.gamma_head.vertex != self.T.root:
            raise ValueError("the head of the root edge must sit at the tree root")
        rest = graph_minus_tree(self.G, self.T)
        if rest.multiplicity(*self.gamma) < 1:
            raise ValueError("the root edge must be a non-tree edge of G")

    @property
    def gamma(self) -> Edge:
        """Oriented root edge as ``(head vertex, tail vertex)``."""
        return (self.gamma_head.vertex, self.gamma_tail.vertex)

    @property
    def gamma_is_loop(self) -> bool:
        return self.gamma_head.vertex == self.gamma_tail.vertex

    @cached_property
    def rest(self) -> Multigraph:
        """``G - T``."""
        return graph_minus_tree(self.G, self.T)

    def is_simple(self) -> bool:
        return self.G.is_simple()

    def key(self) -> tuple:
        return (self.G.key(), self.T.key(), self.gamma_tail.vertex)

    def __eq__(self, other) -> bool:
        return isinstance(other, TreeRootedGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def as_degree_sequence(d: DegreeSequence | Iterable[int]) -> DegreeSequence:
    return d if isinstance(d, DegreeSequence) else DegreeSequence(tuple(d))


def validate_for_tree_sampling(d: DegreeSequence | Iterable[int]) -> DegreeSequence:
    """Check ``d(i) >= 1`` and ``sum d >= 2n - 1``; return ``d`` as a DegreeSequence."""
    d = as_degree_sequence(d)
    if min(d.degrees) < 1:
        raise DegreeTooSmall(f"every degree must be at least 1, got {d}")
    if d.twice_m < 2 * d.n - 1:
        raise SumTooSmall(f"sum of degrees {d.twice_m} < 2n-1 = {2 * d.n - 1}")
    return d


def validate_for_tree_weighted(d: DegreeSequence | Iterable[int]) -> DegreeSequence:
    """Check ``d(i) >= 1``, even ``sum d >= 2n`` and ``n >= 2``."""
    d = as_degree_sequence(d)
    if min(d.degrees) < 1:
        raise DegreeTooSmall(f"every degree must be at least 1, got {d}")
    if d.twice_m % 2:
        raise OddSum(f"sum of degrees {d.twice_m} is odd")
    if d.twice_m < 2 * d.n:
        raise SumTooSmall(f"sum of degrees {d.twice_m} < 2n = {2 * d.n}")
    if d.n < 2:
        raise InvalidDegreeSequence("tree-weighted graphs need at least two vertices")
    return d


def child_sequence(t: RootedTree) -> ChildSequence:
    return t.child_sequence()


def check_child_sequence(c: Sequence[int]) -> ChildSequence:
    c = tuple(int(x) for x in c)
    if any(x < 0 for x in c) or sum(c) != len(c) - 1:
        raise NotAChildSequence(f"{c} is not a child sequence (entries must sum to n-1)")
    return c


def graph_minus_tree(g: Multigraph, t: RootedTree) -> Multigraph:
    """Decrement the multiplicity of every tree edge by one."""
    mult = dict(g.mult)
    for e in t.undirected_edges():
        if mult.get(e, 0) < 1:
            raise TreeEdgeMissing(f"tree edge {e} is not an edge of the graph")
        mult[e] -= 1
    return Multigraph(g.n, mult)


def tree_as_multigraph(t: RootedTree) -> Multigraph:
    return Multigraph.from_pairs(t.n, t.undirected_edges())


def check_degrees(g: Multigraph, d: DegreeSequence) -> None:
    if g.degrees != d.degrees:
        raise DegreeMismatch(f"graph degrees {g.degrees} differ from {d.degrees}")
