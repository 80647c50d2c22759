"""Domain errors.

Exit code conventions for the command line layer: 2 for malformed input
or an invalid request, 3 for a model family the kit does not support.
"""


class UlrichKitError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class MalformedModel(UlrichKitError):
    pass


class UnsupportedModel(UlrichKitError):
    exit_code = 3


class UnsupportedQuadricDim(UlrichKitError):
    exit_code = 3


class UnsupportedProduct(UlrichKitError):
    exit_code = 3


class NoOracle(UlrichKitError):
    exit_code = 3


class NoRestrictionRule(UlrichKitError):
    exit_code = 3


class NoDualRule(UlrichKitError):
    exit_code = 3


class UnknownK0Rank(UlrichKitError):
    exit_code = 3


class ModelMismatch(UlrichKitError):
    pass


class MalformedDescriptor(UlrichKitError):
    pass


class UnknownSlopeZero(UlrichKitError):
    # degree-zero semistable data without the triviality bit
    pass


class Indeterminate(UlrichKitError):
    pass


class DegenerateSystem(UlrichKitError):
    pass


class IncompleteTable(UlrichKitError):
    pass


class DimensionMismatch(UlrichKitError):
    pass


class NotUlrich(UlrichKitError):
    pass


class NotUlrichInput(UlrichKitError):
    pass


class NonDivisibleRank(UlrichKitError):
    pass


class ZeroExt(UlrichKitError):
    pass


class NonpositiveT(UlrichKitError):
    pass


class MissingConvention(UlrichKitError):
    pass


class NoSlope(UlrichKitError):
    pass


class EmptyGrid(UlrichKitError):
    pass


class ModeDisagreement(UlrichKitError):
    """The direct and sheafwise Ulrich checks returned different verdicts.

    This is a defect in the kit, never a property of the input; it must
    surface instead of being swallowed.
    """


class OracleDefect(UlrichKitError):
    """An internal cross-check (for example Serre duality) failed."""


class ParseError(UlrichKitError):
    pass
