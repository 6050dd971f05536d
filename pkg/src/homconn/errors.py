"""Exception hierarchy.

Every library error carries a short ``code`` that the command line layer
puts in its error records.
"""


class HomConnError(Exception):
    code = "Error"


class DomainError(HomConnError, ValueError):
    """Input is well formed but outside the domain of the operation."""

    code = "DomainError"


class NonFinite(DomainError):
    code = "NonFinite"


class NonSymmetric(DomainError):
    code = "NonSymmetric"


NotSymmetric = NonSymmetric


class NonAntisymmetric(DomainError):
    code = "NonAntisymmetric"


class NotInAlgebra(DomainError):
    code = "NotInAlgebra"


class NotTraceless(DomainError):
    code = "NotTraceless"


class NoConvergence(HomConnError, ArithmeticError):
    code = "NoConvergence"


class InvalidLift(DomainError):
    code = "InvalidLift"


class NotInSolutionSpace(DomainError):
    code = "NotInSolutionSpace"


class NotEquivariant(DomainError):
    code = "NotEquivariant"

    def __init__(self, message, residual=None, witness=None):
        super().__init__(message)
        self.residual = residual
        self.witness = witness


class SuiteFailure(HomConnError):
    code = "SuiteFailure"

    def __init__(self, failed):
        super().__init__("failing suites: " + ", ".join(failed))
        self.failed = list(failed)
