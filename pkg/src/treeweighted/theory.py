"""Closed-form counts, unnormalised laws and limit constants.

Counting formulas and weights are exact (``int`` / ``Fraction``); limit
constants are floats.  Series over the support of a degree distribution are
finite sums because :class:`DegreeDistribution` is finitely supported.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    DegreeDistribution,
    DegreeSequence,
    Edge,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
    as_degree_sequence,
    check_child_sequence,
    check_degrees,
    edge_key,
    falling_factorial,
    validate_for_tree_sampling,
)
from .errors import (
    DegenerateVariance,
    DegreeTooSmall,
    HostNotSimple,
    MeanTooSmall,
    TooFewHalfEdges,
    ZeroMean,
)

_EPS = 1e-12


def tree_count(c: Iterable[int]) -> int:
    """Number of rooted trees on ``[n]`` with child sequence ``c``."""
    c = check_child_sequence(c)
    out = math.factorial(len(c) - 1)
    for x in c:
        out //= math.factorial(x)
    return out


def tree_law(t: RootedTree, d: DegreeSequence | Iterable[int]) -> Fraction:
    """Probability that the fixed-degree coalescent builds exactly ``t``."""
    d = validate_for_tree_sampling(d)
    if t.n != d.n:
        raise ValueError("tree and degree sequence have different sizes")
    num = 1
    for deg, c in zip(d.degrees, t.child_counts.tolist()):
        num *= falling_factorial(deg - 1, c)
        if num == 0:
            return Fraction(0)
    return Fraction(num, falling_factorial(d.twice_m - d.n, d.n - 1))


def execution_path_count(d: DegreeSequence | Iterable[int]) -> int:
    d = validate_for_tree_sampling(d)
    return math.factorial(d.n - 1) * falling_factorial(d.twice_m - d.n, d.n - 1)


def cm_weight(g: Multigraph) -> Fraction:
    """Unnormalised configuration-model weight of ``g``."""
    den = 1
    for u, v, m in g.edges():
        den *= math.factorial(m)
        if u == v:
            den *= 2**m
    return Fraction(1, den)


def cm_normaliser(d: DegreeSequence | Iterable[int]) -> Fraction:
    """Constant ``C`` with ``P(CM(d) = g) = C * cm_weight(g)``."""
    d = as_degree_sequence(d)
    two_m = d.twice_m
    if two_m % 2:
        raise ValueError("configuration model needs an even number of half-edges")
    m = two_m // 2
    num = 2**m * math.factorial(m)
    for x in d:
        num *= math.factorial(x)
    return Fraction(num, math.factorial(two_m))


def twg_weight(x: TreeRootedGraph, d: DegreeSequence | Iterable[int] | None = None) -> Fraction:
    """Unnormalised law of a tree-rooted graph under the tree-weighted model."""
    if d is not None:
        check_degrees(x.G, as_degree_sequence(d))
    rest = x.rest
    num = rest.multiplicity(*x.gamma) * (2 if x.gamma_is_loop else 1)
    return cm_weight(rest) * num


def rho(p: DegreeDistribution) -> float:
    mu1 = p.mu1
    if mu1 < 2 - _EPS:
        raise MeanTooSmall(f"mean degree {mu1} < 2")
    return 1.0 / (mu1 - 1.0)


def binom_pmf(n: int, k: int, prob: float) -> float:
    if k < 0 or k > n:
        return 0.0
    return math.comb(n, k) * prob**k * (1.0 - prob) ** (n - k)


def _require_positive_support(p: DegreeDistribution) -> None:
    if p[0] > 0:
        raise DegreeTooSmall("limit child law needs a degree law on the positive integers")


def q_limit(p: DegreeDistribution, a: int) -> float:
    """Limiting fraction of vertices with ``a`` children."""
    _require_positive_support(p)
    r = rho(p)
    return sum(pb * binom_pmf(b - 1, a, r) for b, pb in p.p.items() if b > a)


def q_distribution(p: DegreeDistribution) -> DegreeDistribution:
    _require_positive_support(p)
    r = rho(p)
    q: dict[int, float] = {}
    for b, pb in p.p.items():
        for a in range(b):
            q[a] = q.get(a, 0.0) + pb * binom_pmf(b - 1, a, r)
    total = sum(q.values())
    return DegreeDistribution({a: v / total for a, v in q.items()})


def sigma(q: DegreeDistribution) -> float:
    """Tree scaling constant ``sqrt(mu2(q) - 1)``."""
    excess = q.mu2 - 1.0
    if excess <= _EPS:
        raise DegenerateVariance(f"mu2(q) - 1 = {excess} is not positive")
    return math.sqrt(excess)


def _alpha_factors(p: DegreeDistribution) -> tuple[dict[int, float], dict[int, float]]:
    # child[k]: child endpoint keeps k leftover half-edges;
    # parent[l]: size-biased by the parent's child count.
    r = rho(p)
    child: dict[int, float] = {}
    parent: dict[int, float] = {}
    for b, pb in p.p.items():
        if b < 1:
            continue
        for a in range(b):
            w = pb * binom_pmf(b - 1, a, r)
            k = b - 1 - a
            child[k] = child.get(k, 0.0) + w
            if a:
                parent[k] = parent.get(k, 0.0) + a * w
    return child, parent


def alpha_limit(p: DegreeDistribution, k: int, l: int) -> float:
    """Limiting density of tree edges whose child/parent keep ``k``/``l`` half-edges."""
    child, parent = _alpha_factors(p)
    return child.get(k, 0.0) * parent.get(l, 0.0)


def alpha_table(p: DegreeDistribution) -> dict[tuple[int, int], float]:
    child, parent = _alpha_factors(p)
    return {
        (k, l): ck * pl
        for k, ck in sorted(child.items())
        for l, pl in sorted(parent.items())
        if ck * pl > 0
    }


def symmetrise(table: Mapping[tuple[int, int], float]) -> dict[tuple[int, int], float]:
    """Fold an ordered-pair table onto ``k <= l``."""
    out: dict[tuple[int, int], float] = {}
    for (k, l), v in table.items():
        key = (k, l) if k <= l else (l, k)
        out[key] = out.get(key, 0) + v
    return out


def minus_distribution(p: DegreeDistribution) -> DegreeDistribution:
    """Limiting degree law of ``G - T`` (row sums of the alpha table)."""
    child, _ = _alpha_factors(p)
    total = sum(child.values())
    return DegreeDistribution({k: v / total for k, v in child.items()})


def poisson_params(
    p_minus: DegreeDistribution, alpha: Mapping[tuple[int, int], float]
) -> tuple[float, float]:
    """``(nu, eta)`` for loops/multi-edges and host collisions."""
    mu1 = p_minus.mu1
    if mu1 <= _EPS:
        raise ZeroMean("the superposed graph has mean degree 0")
    nu = p_minus.mu2 / mu1 - 1.0
    eta = sum(i * j * v for (i, j), v in alpha.items()) / mu1
    return nu, eta


def simplicity_constant(nu: float, eta: float) -> float:
    return math.exp(-nu / 2 - nu**2 / 4 - eta)


def expected_factorial_moment(
    size_l: int, size_m: int, size_n: int, m: int, q: int, r: int, s: int
) -> Fraction:
    """Main term of ``E[(L)_q (M)_r (N)_s]`` for a matching of ``2m`` half-edges."""
    if min(q, r, s) < 0:
        raise ValueError("moment orders must be non-negative")
    pairs = q + 2 * r + s
    if m < pairs:
        raise TooFewHalfEdges(f"{2 * m} half-edges cannot host {pairs} disjoint pairs")
    num = (
        falling_factorial(size_l, q)
        * falling_factorial(size_m, r)
        * falling_factorial(size_n, s)
    )
    den = 1
    for i in range(pairs):
        den *= 2 * m - 1 - 2 * i
    return Fraction(num, den)


def _host_edges(h: Iterable[Edge], n: int) -> set[Edge]:
    seen: set[Edge] = set()
    for u, v in h:
        if u == v:
            raise HostNotSimple(f"host graph has a loop at {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"host edge {(u, v)} outside 1..{n}")
        e = edge_key(u, v)
        if e in seen:
            raise HostNotSimple(f"host graph repeats edge {e}")
        seen.add(e)
    return seen


def theoretical_sizes(
    d_minus: DegreeSequence | Iterable[int], h: Iterable[Edge] = ()
) -> tuple[int, int, int]:
    """Sizes of the loop, multi-edge and host-collision index sets."""
    d = as_degree_sequence(d_minus)
    host = _host_edges(h, d.n)
    pairs = [x * (x - 1) for x in d]  # (d)_2
    size_l = sum(pairs) // 2
    total = sum(pairs)
    # sum over u < v of (d(u))_2 (d(v))_2 / 2, minus host pairs
    cross = (total * total - sum(x * x for x in pairs)) // 2
    cross -= sum(pairs[u - 1] * pairs[v - 1] for u, v in host)
    size_m = cross // 2
    size_n = sum(d[u] * d[v] for u, v in host)
    return size_l, size_m, size_n


@dataclass
class LimitConstants:
    rho: float
    q: dict[int, float]
    sigma: float | None
    alpha: dict[tuple[int, int], float]
    nu: float | None
    eta: float | None
    simplicity: float | None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["q"] = {str(a): v for a, v in self.q.items()}
        out["alpha"] = [[k, l, v] for (k, l), v in sorted(self.alpha.items())]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def limit_constants(p: DegreeDistribution) -> LimitConstants:
    q = q_distribution(p)
    try:
        sig = sigma(q)
    except DegenerateVariance:
        sig = None
    alpha = alpha_table(p)
    try:
        nu, eta = poisson_params(minus_distribution(p), alpha)
        simple = simplicity_constant(nu, eta)
    except ZeroMean:
        nu = eta = simple = None
    return LimitConstants(rho(p), dict(q.p), sig, alpha, nu, eta, simple)
