"""Exception taxonomy shared by every layer of the library.

All conditions that a caller can provoke with bad (but well-typed) input
raise a subclass of :class:`FfgsError`, so the CLI can map failures onto
stable exit codes.  Genuine bugs keep raising plain ``AssertionError`` /
``TypeError`` and are never caught.
"""

from __future__ import annotations

__all__ = [
    "FfgsError",
    "NonPrime",
    "ReducibleModulus",
    "EnvelopeExceeded",
    "LengthMismatch",
    "FieldMismatch",
    "BadTarget",
    "BadParameter",
    "OverflowGuard",
    "ShapeError",
    "AnnihilatorViolation",
    "TwistViolation",
    "RelationViolation",
    "NotComposable",
    "NotEquivariant",
    "BudgetExceeded",
    "PrecisionExceeded",
    "UnstableTruncation",
    "MissingDegree",
    "MissingDeRhamData",
    "SchemaError",
]


class FfgsError(Exception):
    """Base class for all library-level failures."""


class NonPrime(FfgsError):
    """Field characteristic is not a prime number."""


class ReducibleModulus(FfgsError):
    """Supplied modulus polynomial is not irreducible (or not monic of the right degree)."""


class EnvelopeExceeded(FfgsError):
    """Requested parameters fall outside the supported (p, n, precision) envelope."""


class LengthMismatch(FfgsError):
    """Witt vectors (or covectors) of different lengths were combined."""


class FieldMismatch(FfgsError):
    """Operands live over different coefficient fields."""


class BadTarget(FfgsError):
    """Target length of a structure map (V, R) is inconsistent with the operand."""


class BadParameter(FfgsError):
    """A numeric parameter (power, degree, rank, ...) is out of range."""


class OverflowGuard(FfgsError):
    """An intermediate integer in the structure-polynomial recursion exceeded the configured budget."""


class ShapeError(FfgsError):
    """Matrix shapes are inconsistent."""


class AnnihilatorViolation(FfgsError):
    """A matrix entry does not respect the annihilator profile of source/target summands."""


class TwistViolation(FfgsError):
    """A semilinear map carries the wrong Frobenius twist for its role."""


class RelationViolation(FfgsError):
    """F and V matrices fail FV = VF = p on the given profile."""


class NotComposable(FfgsError):
    """Maps in a sequence have mismatched shapes, fields or profiles."""


class NotEquivariant(FfgsError):
    """A map that must commute with F and V does not."""


class BudgetExceeded(FfgsError):
    """An exhaustive search exceeded its configured budget (reported as Indeterminate)."""


class PrecisionExceeded(FfgsError):
    """Requested truncation level exceeds the stored precision of the object."""


class UnstableTruncation(FfgsError):
    """A quantity that must be independent of the truncation level changed between levels."""


class MissingDegree(FfgsError):
    """A packet lacks data for a cohomological degree required by the computation."""


class MissingDeRhamData(FfgsError):
    """A packet lacks the o/b/d blocks needed by a de Rham route computation."""


class SchemaError(FfgsError):
    """A JSON document does not conform to the expected schema."""
