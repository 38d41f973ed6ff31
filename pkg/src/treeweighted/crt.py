"""Finite-n witnesses of the Brownian scaling limit.

Trees are rescaled by ``sigma / sqrt(n)``; at this scale the distance between
two uniform vertices should have an ``n``-free law.  The reference sampler
draws uniform trees with the same child-sequence law as the coalescent but
through a completely different construction (a hypergeometric child
sequence and the cycle lemma), so agreement between the two is a real test.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from . import _kernels
from .core import DegreeSequence, RootedTree, validate_for_tree_sampling
from .errors import EmptySample
from .samplers import RNGLike, as_generator, parent_array, plan_coalescent, run_coalescent
from .theory import q_distribution, sigma

MAXDEG_WARN_RATIO = 1.0


class MaxDegreeWarning(UserWarning):
    pass


@dataclass
class RescaledSample:
    values: np.ndarray
    n: int
    sigma: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0):
            raise ValueError("rescaled values must be non-negative")

    def __len__(self) -> int:
        return self.values.size

    def ks(self, other: RescaledSample) -> float:
        return float(stats.ks_2samp(self.values, other.values).statistic)

    def ks_rayleigh(self) -> float:
        """KS distance to the standard Rayleigh law.  The normalisation of
        the limit is convention-dependent, so treat this as informative."""
        return float(stats.kstest(self.values, "rayleigh").statistic)

    def summary(self, reference: RescaledSample | None = None) -> dict:
        if not len(self):
            raise EmptySample("no values to summarise")
        out = {
            "n": self.n,
            "sigma": self.sigma,
            "reps": len(self),
            "mean": float(self.values.mean()),
            "variance": float(self.values.var(ddof=1)) if len(self) > 1 else 0.0,
            "ks_rayleigh": self.ks_rayleigh(),
        }
        if reference is not None:
            out["ks_reference"] = self.ks(reference)
        return out

    def to_json(self, reference: RescaledSample | None = None, **kwargs) -> str:
        return json.dumps(self.summary(reference), **kwargs)

    def to_text(self) -> str:
        return "".join(f"{v!r}\n" for v in self.values.tolist())


def _distance(parent0: np.ndarray, root: int, gen: np.random.Generator) -> int:
    n = parent0.size
    u, v = gen.integers(0, n, size=2)
    depth = _kernels.depths_from_parent(parent0, root)
    return int(_kernels.tree_distance(parent0, depth, u, v))


def two_point_distance(t: RootedTree, rng: RNGLike = None) -> int:
    """Graph distance between two independent uniform vertices of ``t``."""
    parent0 = t.parent.astype(np.int64) - 1
    return _distance(parent0, t.root - 1, as_generator(rng))


def height_profile(t: RootedTree) -> dict[int, int]:
    """Number of vertices at each depth; the largest key is the height."""
    depths, counts = np.unique(t.depths(), return_counts=True)
    return dict(zip(depths.tolist(), counts.tolist()))


def scaling_constant(d: DegreeSequence | Sequence[int]) -> float:
    """``sigma`` of the offspring law induced by the empirical degree law."""
    d = validate_for_tree_sampling(d)
    return sigma(q_distribution(d.distribution()))


def rescaled_two_point_sample(
    d: DegreeSequence | Sequence[int], reps: int, rng: RNGLike = None
) -> RescaledSample:
    """``(sigma / sqrt(n)) * dist(U, V)`` in ``reps`` independent coalescent trees."""
    d = validate_for_tree_sampling(d)
    sig = scaling_constant(d)
    plan = plan_coalescent(d)
    gen = as_generator(rng)
    out = np.empty(reps)
    for i in range(reps):
        run = run_coalescent(plan, gen)
        parent0 = parent_array(plan, run)
        root = int(np.flatnonzero(parent0 < 0)[0])
        out[i] = _distance(parent0, root, gen)
    return RescaledSample(out * sig / math.sqrt(d.n), d.n, sig)


def reference_child_sequence(d: DegreeSequence, gen: np.random.Generator) -> np.ndarray:
    """Child counts of a uniform ``(n-1)``-subset of the non-root half-edges.

    This multivariate hypergeometric law is the child-sequence law of the
    coalescent tree.
    """
    deg = d.array
    owner = np.repeat(np.arange(d.n), deg - 1)
    chosen = gen.choice(owner.size, size=d.n - 1, replace=False)
    return np.bincount(owner[chosen], minlength=d.n)


def uniform_tree_with_children(c: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """0-based parent array of a uniform rooted tree with child sequence ``c``.

    Shuffle the vertices, rotate the Lukasiewicz word into its unique valid
    rotation and read off a plane tree in preorder.
    """
    n = c.size
    order = gen.permutation(n)
    walk = np.cumsum(c[order] - 1)
    start = (int(np.argmin(walk)) + 1) % n
    order = np.roll(order, -start)
    return _kernels.parent_from_preorder(order, c[order])


def reference_two_point_sample(
    d: DegreeSequence | Sequence[int], reps: int, rng: RNGLike = None
) -> RescaledSample:
    """Same functional as :func:`rescaled_two_point_sample` on reference trees."""
    d = validate_for_tree_sampling(d)
    sig = scaling_constant(d)
    gen = as_generator(rng)
    out = np.empty(reps)
    for i in range(reps):
        parent0 = uniform_tree_with_children(reference_child_sequence(d, gen), gen)
        root = int(np.flatnonzero(parent0 < 0)[0])
        out[i] = _distance(parent0, root, gen)
    return RescaledSample(out * sig / math.sqrt(d.n), d.n, sig)


def max_degree_diagnostic(d: DegreeSequence | Sequence[int], warn: bool = True) -> float:
    """``max d(i) / sqrt(n)``; a ratio of 1 or more means the degrees are
    too spread for the scaling limit to be visible at this ``n``."""
    d = d if isinstance(d, DegreeSequence) else DegreeSequence(d)
    ratio = max(d.degrees) / math.sqrt(d.n)
    if warn and ratio >= MAXDEG_WARN_RATIO:
        warnings.warn(f"max degree / sqrt(n) = {ratio:.3g}", MaxDegreeWarning, stacklevel=2)
    return ratio
