"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` subclasses mean the inputs
were outside an operation's domain, ``ContractViolation`` subclasses mean an
identity that must hold exactly did not (which points at an engine bug or a
false mathematical claim, never at bad input).
"""


class CueMomentsError(Exception):
    pass


class ValidationError(CueMomentsError, ValueError):
    pass


class ContractViolation(CueMomentsError, ArithmeticError):
    pass


class DuplicateAbscissa(ValidationError):
    pass


class NonzeroRemainder(ContractViolation):
    pass


class TruncationExceeded(ValidationError):
    pass


class MixedEntryKinds(ValidationError, TypeError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonTerminating(ValidationError):
    pass


class PochhammerPole(ValidationError, ZeroDivisionError):
    pass


class ConvergenceConditionViolated(ValidationError):
    pass


class SlowConvergence(CueMomentsError, ArithmeticError):
    pass


class QEqualsOne(ValidationError):
    pass


class NonConvergence(CueMomentsError, ArithmeticError):
    pass


class RootFindingFailure(NonConvergence):
    pass


class DegeneratePivot(ContractViolation):
    def __init__(self, j, N, k, detail=""):
        self.j, self.N, self.k = j, N, k
        msg = f"coefficient c_{j} is not determined by the order-{j} equation (N={N}, k={k})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ResidualPDenominator(ContractViolation):
    pass


class NotPrime(ValidationError):
    pass


class SizeTooLarge(ValidationError):
    pass


class IoFailure(CueMomentsError, OSError):
    pass
