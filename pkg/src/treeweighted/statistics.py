"""Statistics of sampled objects, mergeable accumulators and distances
between empirical and reference distributions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from numbers import Real
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy import stats as sps

from .core import (
    DegreeSequence,
    Edge,
    Matching,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
    as_degree_sequence,
    check_child_sequence,
    edge_key,
)
from .errors import EmptySample, HostNotSimple, LengthMismatch, SchemaMismatch


def child_statistics(c: Sequence[int]) -> dict[int, int]:
    """Child statistics vector ``Q(a) = #{i : c(i) = a}``."""
    c = check_child_sequence(c)
    return dict(sorted(Counter(c).items()))


def p_table(d: DegreeSequence | Sequence[int], c: Sequence[int]) -> dict[tuple[int, int], int]:
    """Joint histogram of ``(degree, child count)`` over vertices."""
    d = as_degree_sequence(d)
    if len(c) != d.n:
        raise LengthMismatch(f"{d.n} degrees but {len(c)} child counts")
    return dict(sorted(Counter(zip(d.degrees, (int(x) for x in c))).items()))


@dataclass(frozen=True)
class JointDegreeTable:
    """Counts of tree edges by the leftover degrees of their endpoints.

    Keys are ordered ``(child, parent)``; :meth:`symmetrised` folds them
    onto unordered pairs ``k <= l``.
    """

    counts: Mapping[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.counts.get(key, 0)

    def symmetrised(self) -> dict[tuple[int, int], int]:
        out: Counter = Counter()
        for (k, l), v in self.counts.items():
            out[(k, l) if k <= l else (l, k)] += v
        return dict(sorted(out.items()))

    def weighted_sum(self) -> int:
        """``sum k * l * A(k, l)``."""
        return sum(k * l * v for (k, l), v in self.counts.items())


def leftover_degrees(x: TreeRootedGraph) -> np.ndarray:
    return np.asarray(x.rest.degrees, dtype=np.int64)


def a_table(x: TreeRootedGraph) -> JointDegreeTable:
    dm = x.rest.degrees
    return JointDegreeTable(
        dict(sorted(Counter((dm[c - 1], dm[p - 1]) for c, p in x.T.edges()).items()))
    )


def a_table_arrays(parent: np.ndarray, d_minus: np.ndarray) -> JointDegreeTable:
    """Same as :func:`a_table` from a 0-based parent array (``-1`` at the root)."""
    child = np.flatnonzero(parent >= 0)
    k = d_minus[child]
    l = d_minus[parent[child]]
    width = int(max(k.max(initial=0), l.max(initial=0))) + 1
    flat = np.bincount(k * width + l, minlength=width * width)
    nz = np.flatnonzero(flat)
    return JointDegreeTable({(int(i // width), int(i % width)): int(flat[i]) for i in nz})


def r_statistic(
    t: RootedTree, d: DegreeSequence | Sequence[int], b1: int, b2: int, a1: int, a2: int
) -> int:
    """Non-root ``u`` with ``d(u)=b1``, ``d(parent)=b2``, ``c(u)=a1``, ``c(parent)=a2``."""
    d = as_degree_sequence(d)
    c = t.child_counts
    return sum(
        1
        for u, p in t.edges()
        if d[u] == b1 and d[p] == b2 and c[u - 1] == a1 and c[p - 1] == a2
    )


class ConflictCounts(NamedTuple):
    """Loops, multi-edge pairs off the host, and collisions with the host."""

    L: int
    M: int
    N: int

    @property
    def simple(self) -> bool:
        return self.L + self.M + self.N == 0


def _host_set(h: Iterable[Edge]) -> set[Edge]:
    host: set[Edge] = set()
    for u, v in h:
        if u == v:
            raise HostNotSimple(f"host graph has a loop at {u}")
        e = edge_key(u, v)
        if e in host:
            raise HostNotSimple(f"host graph repeats edge {e}")
        host.add(e)
    return host


def conflict_counts(g: Multigraph | Matching, h: Iterable[Edge], n: int | None = None) -> ConflictCounts:
    """``(L, M, N)`` for the superposition of ``g`` and a simple host ``h``.

    ``M`` is counted from multiplicities as ``sum C(m(e), 2)`` over non-loop
    edges outside the host.
    """
    if isinstance(g, Matching):
        if n is None:
            n = max((max(a.vertex, b.vertex) for a, b in g.pairs), default=0)
        g = g.to_multigraph(n)
    host = _host_set(h)
    L = M = N = 0
    for u, v, m in g.edges():
        if u == v:
            L += m
        elif (u, v) in host:
            N += m
        else:
            M += m * (m - 1) // 2
    return ConflictCounts(L, M, N)


def tree_edge_keys(parent: np.ndarray) -> np.ndarray:
    """Sorted ``lo * n + hi`` keys of the edges of a 0-based parent array."""
    n = parent.size
    child = np.flatnonzero(parent >= 0)
    par = parent[child]
    return np.sort(np.minimum(child, par) * n + np.maximum(child, par))


def conflict_counts_arrays(
    a: np.ndarray, b: np.ndarray, host_keys: np.ndarray, n: int
) -> ConflictCounts:
    """Vectorised :func:`conflict_counts` for matched pairs ``a[i]``--``b[i]``.

    ``host_keys`` are sorted ``lo * n + hi`` keys (see :func:`tree_edge_keys`).
    """
    loops = a == b
    L = int(loops.sum())
    lo = np.minimum(a[~loops], b[~loops])
    hi = np.maximum(a[~loops], b[~loops])
    keys, mult = np.unique(lo * n + hi, return_counts=True)
    if host_keys.size:
        pos = np.searchsorted(host_keys, keys)
        pos[pos == host_keys.size] = 0
        on_host = host_keys[pos] == keys
    else:
        on_host = np.zeros(keys.size, bool)
    N = int(mult[on_host].sum())
    off = mult[~on_host]
    M = int((off * (off - 1) // 2).sum())
    return ConflictCounts(L, M, N)


@dataclass
class Accumulator:
    """Running sums and histograms over samples; a commutative monoid under
    :meth:`merge`.

    Sums keep the numeric type of the added values, so integer and
    ``Fraction`` statistics merge exactly.
    """

    count: int = 0
    sums: dict[str, object] = field(default_factory=dict)
    sumsq: dict[str, object] = field(default_factory=dict)
    histograms: dict[str, Counter] = field(default_factory=dict)

    @property
    def schema(self) -> tuple[frozenset, frozenset]:
        return frozenset(self.sums), frozenset(self.histograms)

    def add(self, values: Mapping[str, object] = {}, keys: Mapping[str, Hashable] = {}) -> None:
        if self.count and (frozenset(values), frozenset(keys)) != self.schema:
            raise SchemaMismatch(f"sample fields {sorted(values)} {sorted(keys)} do not match")
        self.count += 1
        for name, x in values.items():
            self.sums[name] = self.sums.get(name, 0) + x
            self.sumsq[name] = self.sumsq.get(name, 0) + x * x
        for name, k in keys.items():
            self.histograms.setdefault(name, Counter())[k] += 1

    def merge(self, other: "Accumulator") -> "Accumulator":
        if self.count == 0:
            return other.copy()
        if other.count == 0:
            return self.copy()
        if self.schema != other.schema:
            raise SchemaMismatch("cannot merge accumulators with different statistics")
        out = self.copy()
        out.count += other.count
        for name in other.sums:
            out.sums[name] = out.sums[name] + other.sums[name]
            out.sumsq[name] = out.sumsq[name] + other.sumsq[name]
        for name, hist in other.histograms.items():
            out.histograms[name] = out.histograms[name] + hist
        return out

    def copy(self) -> "Accumulator":
        return Accumulator(
            self.count,
            dict(self.sums),
            dict(self.sumsq),
            {k: Counter(v) for k, v in self.histograms.items()},
        )

    def mean(self, name: str) -> float:
        if not self.count:
            raise EmptySample("no samples accumulated")
        return float(self.sums[name]) / self.count

    def variance(self, name: str) -> float:
        """Unbiased sample variance."""
        if self.count < 2:
            return float("nan")
        mean = float(self.sums[name]) / self.count
        return max(float(self.sumsq[name]) - self.count * mean * mean, 0.0) / (self.count - 1)

    def stderr(self, name: str) -> float:
        return math.sqrt(self.variance(name) / self.count)

    def histogram(self, name: str) -> Counter:
        return self.histograms[name]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Accumulator):
            return NotImplemented
        return (
            self.count == other.count
            and self.sums == other.sums
            and self.sumsq == other.sumsq
            and {k: +v for k, v in self.histograms.items()}
            == {k: +v for k, v in other.histograms.items()}
        )


def merge(a: Accumulator, b: Accumulator) -> Accumulator:
    return a.merge(b)


class Distances(NamedTuple):
    tv: float
    chi2_p: float
    ks: float


def distribution_distances(emp: Mapping[Hashable, int], ref: Mapping[Hashable, float]) -> Distances:
    """Total variation, Pearson chi-square p-value and KS statistic.

    ``emp`` maps outcomes to counts; ``ref`` maps outcomes to probabilities.
    Reference mass missing from ``ref`` (a truncated infinite support) counts
    as mass on outcomes never observed.  Chi-square bins with expected count
    below 5 are pooled into one tail bin.  KS is ``nan`` unless every outcome
    is a real number.
    """
    total = sum(emp.values())
    if total <= 0:
        raise EmptySample("empirical histogram is empty")
    keys = set(emp) | set(ref)
    ref_mass = float(sum(ref.values()))
    missing = max(0.0, 1.0 - ref_mass)
    tv = 0.5 * (
        sum(abs(emp.get(k, 0) / total - float(ref.get(k, 0.0))) for k in keys) + missing
    )
    return Distances(min(tv, 1.0), _chi2_pvalue(emp, ref, total, missing), _ks(emp, ref, total))


def _chi2_pvalue(emp, ref, total, missing) -> float:
    obs, exp = [], []
    tail_obs, tail_exp = 0.0, missing * total
    for k in set(emp) | set(ref):
        e = float(ref.get(k, 0.0)) * total
        o = emp.get(k, 0)
        if e >= 5:
            obs.append(o)
            exp.append(e)
        else:
            tail_obs += o
            tail_exp += e
    if tail_exp > 0 or tail_obs > 0:
        if tail_exp >= 5 or not exp:
            obs.append(tail_obs)
            exp.append(tail_exp)
        else:
            j = int(np.argmin(exp))
            obs[j] += tail_obs
            exp[j] += tail_exp
    if any(e == 0 and o > 0 for o, e in zip(obs, exp)):
        return 0.0
    if len(obs) < 2:
        return 1.0
    exp_arr = np.asarray(exp, float)
    exp_arr *= total / exp_arr.sum()
    return float(sps.chisquare(np.asarray(obs, float), exp_arr).pvalue)


def _ks(emp, ref, total) -> float:
    keys = set(emp) | set(ref)
    if not all(isinstance(k, Real) for k in keys):
        return float("nan")
    f_emp = f_ref = 0.0
    sup = 0.0
    for k in sorted(keys):
        f_emp += emp.get(k, 0) / total
        f_ref += float(ref.get(k, 0.0))
        sup = max(sup, abs(f_emp - f_ref))
    return sup


def poisson_pmf(lam: float, tail: float = 1e-15) -> dict[int, float]:
    """Poisson pmf truncated once the remaining mass drops below ``tail``."""
    out = {}
    k, p, acc = 0, math.exp(-lam), 0.0
    while True:
        out[k] = p
        acc += p
        if 1.0 - acc < tail or (k > lam and p < tail):
            return out
        k += 1
        p *= lam / k


def poisson_product_pmf(lams: Sequence[float], tail: float = 1e-15) -> dict[tuple[int, ...], float]:
    out = {(): 1.0}
    for lam in lams:
        pmf = poisson_pmf(lam, tail)
        out = {key + (k,): v * w for key, v in out.items() for k, w in pmf.items() if v * w > tail}
    return out
