"""Exception hierarchy.

Every error raised by the library derives from :class:`ConeDynError`. The CLI
maps :class:`SchemaError` to exit code 1, :class:`PreconditionError` to exit
code 2 and :class:`VerificationError` to exit code 3.
"""


class ConeDynError(Exception):
    pass


class SchemaError(ConeDynError):
    """Input data could not be parsed."""


class PreconditionError(ConeDynError):
    """An operation was called on data violating its stated precondition."""


class VerificationError(ConeDynError):
    """An internal exact check failed; indicates a bug or an unsupported input."""


class NonSquare(PreconditionError):
    pass


class NonIntegerEntries(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class IntervalNotIsolating(PreconditionError):
    pass


class ArityMismatch(PreconditionError):
    pass


class TestSetNotSpanning(PreconditionError):
    __test__ = False  # keep pytest from collecting it


class NotAmple(PreconditionError):
    pass


class InvariantViolation(PreconditionError):
    pass


class PreconditionViolation(PreconditionError):
    pass


class ConePreservationViolated(PreconditionError):
    pass


class SolvabilityNotWitnessed(PreconditionError):
    """No common eigenvector in the cone survives the commutator descent."""


class StageEigenvectorNotFound(PreconditionError):
    pass


class OracleMissing(PreconditionError):
    pass


class UnknownGenerator(PreconditionError):
    pass


class NotInDerivedSubgroup(PreconditionError):
    pass


class NoSolution(PreconditionError):
    pass


class NonUnique(PreconditionError):
    pass


class UnverifiedRelation(VerificationError):
    pass


class EigenvectorNotFound(VerificationError):
    """Raised when a search that cannot fail on valid input comes back empty."""
