"""
Exception hierarchy for niljordan

Every error carries the exit code the CLI reports for it.
"""


class NilJordanError(Exception):
    """Base class for all niljordan errors."""

    exit_code: int = 1


class MalformedInput(NilJordanError):
    """Input could not be parsed or violates a structural precondition."""

    exit_code = 2


class ParseError(MalformedInput):
    pass


class IncompatibleGenerators(MalformedInput):
    pass


class InvalidParameter(MalformedInput):
    pass


class ElementNotInGroup(MalformedInput):
    pass


class CapExceeded(NilJordanError):
    """An enumeration ran past its configured budget."""

    exit_code = 3


class CensusCapExceeded(CapExceeded):
    pass


class HypothesisViolated(NilJordanError):
    """A mathematical precondition of an operation does not hold."""

    exit_code = 4


class NotNormal(HypothesisViolated):
    pass


class NotCentral(HypothesisViolated):
    pass


class NotAHomomorphism(HypothesisViolated):
    pass


class ClassTooLarge(HypothesisViolated):
    pass


class ClassHypothesisViolated(HypothesisViolated):
    pass


class GammaNotNilpotent(HypothesisViolated):
    pass


class RootsOfUnityMoved(HypothesisViolated):
    pass


class NotInvariant(HypothesisViolated):
    pass


class IncompleteSplit(HypothesisViolated):
    pass


class VerificationFailed(NilJordanError):
    exit_code = 5


class DivisionByZero(NilJordanError, ZeroDivisionError):
    exit_code = 2


class Singular(DivisionByZero):
    pass
