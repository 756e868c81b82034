"""Exception types shared across the package."""


class GNKError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GNKError, ValueError):
    pass


class RankDeficient(GNKError, ArithmeticError):
    pass


class NonFiniteEvaluation(GNKError, ArithmeticError):
    pass


class InsufficientData(GNKError, ValueError):
    pass


class BracketNonpositive(GNKError, ArithmeticError):
    """The denominator of g(r) is not positive at the requested radius."""


class SingularAtSolution(GNKError, ArithmeticError):
    pass


class UnknownProblem(GNKError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown problem"


class NonTwoDimensional(GNKError, ValueError):
    pass


class InvalidConstants(GNKError, ValueError):
    pass
