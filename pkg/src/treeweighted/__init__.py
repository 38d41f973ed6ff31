"""Random spanning trees and tree-weighted multigraphs with a fixed degree sequence."""

from .core import (
    DegreeDistribution,
    DegreeSequence,
    HalfEdge,
    Matching,
    Multigraph,
    RootedTree,
    TreeRootedGraph,
)
from .errors import TreeWeightedError
from .samplers import (
    RandomSource,
    configuration_model_sample,
    pitman_sample,
    tree_weighted_sample,
    uniform_matching,
)
from .theory import limit_constants, tree_law, twg_weight

__all__ = [
    "DegreeDistribution",
    "DegreeSequence",
    "HalfEdge",
    "Matching",
    "Multigraph",
    "RandomSource",
    "RootedTree",
    "TreeRootedGraph",
    "TreeWeightedError",
    "configuration_model_sample",
    "limit_constants",
    "pitman_sample",
    "tree_law",
    "tree_weighted_sample",
    "twg_weight",
    "uniform_matching",
]

__version__ = "0.1.0"
