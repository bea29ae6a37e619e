"""Exception types raised across the package."""


class CostdimError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionMismatch(CostdimError):
    """Operands have incompatible shapes."""


class NotSymmetric(CostdimError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class NotPositiveDefinite(CostdimError):
    """Cholesky hit a pivot <= 0; the matrix is not positive-definite."""


class NoConvergence(CostdimError):
    """The eigensolver exceeded its sweep cap."""


class EmptyClass(CostdimError):
    """A class referenced by a supervised operation has no datapoints."""


class SameClass(CostdimError):
    """A pairwise class operation was called with identical class indices."""


class CostShapeMismatch(CostdimError):
    """Cost matrix size does not match the dataset's class count."""


class ZeroDirection(CostdimError):
    """Separability queried along the zero vector."""


class BadTargetDim(CostdimError):
    """Requested target dimensionality is outside 1..source_dim."""


class NotSquare(CostdimError):
    """A square matrix was expected."""


class NegativeCost(CostdimError):
    """Cost matrix entries must be nonnegative."""


class NonzeroDiagonal(CostdimError):
    """Cost matrix diagonal must be exactly zero."""


class ShapeMismatch(CostdimError):
    """Confusion and cost matrices disagree on class count."""


class BadDof(CostdimError):
    """Degrees of freedom too small for the matrix dimension."""


class InsufficientClassData(CostdimError):
    """A class has too few points for the requested split."""


class EmptyInput(CostdimError):
    """An aggregate was requested over an empty collection."""


class MissingCostMatrix(CostdimError):
    """The selected method needs a cost matrix and none was supplied."""


class FileFormatError(CostdimError):
    """Malformed input file; the message names file, line, and column."""
