"""Exception hierarchy.

Every domain failure carries a stable ``name`` used verbatim in CLI reports,
so callers can branch on the failure kind without parsing messages.
"""

from __future__ import annotations


class PolargrassError(Exception):
    """Base class for all errors raised by this package."""

    name = "Error"


class FormatError(PolargrassError):
    """Malformed input data (bad JSON shape, wrong keys, length mismatch).

    CLI maps this family to exit code 1.
    """

    name = "FormatError"


class DomainError(PolargrassError):
    """A mathematically meaningful precondition failed.

    CLI maps this family to exit code 2 and records ``name`` in the report.
    """

    name = "DomainError"


class DimensionMismatch(DomainError):
    name = "DimensionMismatch"


class NonHermitian(DomainError):
    name = "NonHermitian"


class NotPositiveDefinite(DomainError):
    name = "NotPositiveDefinite"


class RankMismatch(DomainError):
    name = "RankMismatch"


class InvariantViolation(DomainError):
    """A typed object failed one of its construction invariants."""

    name = "InvariantViolation"


class NotSkewAdjoint(DomainError):
    name = "NotSkewAdjoint"


class NotAComplexStructure(DomainError):
    name = "NotAComplexStructure"


class NotPositive(DomainError):
    name = "NotPositive"


class NotSkewSymmetric(DomainError):
    name = "NotSkewSymmetric"


class SingularTransform(DomainError):
    name = "SingularTransform"


class EigenspaceDimension(DomainError):
    name = "EigenspaceDimension"


class NotRealizable(DomainError):
    name = "NotRealizable"


class NotComplementary(DomainError):
    name = "NotComplementary"


class ProjectionSingular(DomainError):
    name = "ProjectionSingular"


class NotSymplectic(DomainError):
    name = "NotSymplectic"


class NotOrthogonal(DomainError):
    name = "NotOrthogonal"


class ShapeViolation(DomainError):
    name = "ShapeViolation"


class NumericallySingular(DomainError):
    name = "NumericallySingular"


class BoundaryContact(DomainError):
    name = "BoundaryContact"


class NotUpperHalf(DomainError):
    name = "NotUpperHalf"


class NoPairing(DomainError):
    name = "NoPairing"


class OutsideChart(DomainError):
    name = "OutsideChart"


class NotIncreasing(DomainError):
    name = "NotIncreasing"


class BlockSingular(DomainError):
    name = "BlockSingular"


class DimensionGuard(DomainError):
    name = "DimensionGuard"


class AliasingRisk(UserWarning):
    """Quadrature grid too coarse for the requested mode cutoff."""
