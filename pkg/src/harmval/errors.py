"""Exception hierarchy shared by all harmval modules."""


class HarmvalError(Exception):
    pass


class ParseError(HarmvalError, ValueError):
    """Base class for expression parse failures; ``offset`` is a byte offset."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class NonAnalyticConstruct(ParseError):
    pass


class MathDomainError(HarmvalError, ArithmeticError):
    """A denominator vanished or a log argument touched the branch cut."""


class OutsideDisk(HarmvalError, ValueError):
    pass


class RangeViolation(HarmvalError, ValueError):
    """An inner map of a composition left the open unit disk."""


class OrientationError(HarmvalError, ValueError):
    pass


class DilatationUnimodular(MathDomainError):
    pass


class ContourThroughTarget(HarmvalError):
    pass


class OrientationViolation(HarmvalError):
    pass


class NonConvergence(HarmvalError):
    pass


class JacobianSingular(HarmvalError):
    pass


class SeedBudgetExceeded(HarmvalError):
    pass


class InsufficientProfile(HarmvalError, ValueError):
    pass


class MissingParam(HarmvalError, ValueError):
    pass


class AnalyticOnly(HarmvalError, ValueError):
    pass
