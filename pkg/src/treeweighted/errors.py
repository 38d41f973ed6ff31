"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`TreeWeightedError`, which is itself a :class:`ValueError`.
"""


class TreeWeightedError(ValueError):
    pass


class InvalidDegreeSequence(TreeWeightedError):
    pass


class DegreeTooSmall(InvalidDegreeSequence):
    pass


class SumTooSmall(InvalidDegreeSequence):
    pass


class OddSum(InvalidDegreeSequence):
    pass


class DegreeMismatch(TreeWeightedError):
    pass


class NotAChildSequence(TreeWeightedError):
    pass


class TreeEdgeMissing(TreeWeightedError):
    pass


class InvalidTree(TreeWeightedError):
    pass


class LengthMismatch(TreeWeightedError):
    pass


class HostNotSimple(TreeWeightedError):
    pass


class OddCount(TreeWeightedError):
    pass


class TooLarge(TreeWeightedError):
    pass


class TooFewHalfEdges(TreeWeightedError):
    pass


class MeanTooSmall(TreeWeightedError):
    pass


class ZeroMean(TreeWeightedError):
    pass


class DegenerateVariance(TreeWeightedError):
    pass


class SchemaMismatch(TreeWeightedError):
    pass


class EmptySample(TreeWeightedError):
    pass


class SpecParse(TreeWeightedError):
    pass


class ConfigParse(TreeWeightedError):
    pass
