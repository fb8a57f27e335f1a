"""Exception hierarchy."""


class GlacalcError(Exception):
    """Base class for all errors raised by glacalc."""


class ParseError(GlacalcError, ValueError):
    """Malformed expression or form literal.

    ``position`` is the 0-based character offset where the problem was found.
    """

    def __init__(self, message: str, position: int = -1, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        where = f" at position {position}" if position >= 0 else ""
        super().__init__(f"{message}{where}")


class CoordinateError(GlacalcError, ValueError):
    """Unknown, unbound or mismatched coordinate."""


class DivisionByZero(GlacalcError, ZeroDivisionError):
    """Division by an expression that is identically zero."""


class DimensionError(GlacalcError, ValueError):
    """Shape mismatch between matrices, sections or forms."""


class SingularMatrixError(GlacalcError, ValueError):
    """Matrix is not invertible over the rational-function field."""


class AlgebraMismatch(GlacalcError, ValueError):
    """Operands live on different frame algebras."""


class AnchorError(GlacalcError, ValueError):
    """Effective anchor cannot be formed (h o eta not invertible as given)."""


class RankError(GlacalcError, ValueError):
    """Spanning sections of an IDS are not linearly independent."""

    def __init__(self, message: str, rank: int = -1, pivots=()):
        super().__init__(message)
        self.rank = rank
        self.pivots = tuple(pivots)


class DeclarationError(GlacalcError, ValueError):
    """Invalid declaration file."""


class CrossCheckError(GlacalcError, AssertionError):
    """Two independent computations of the same quantity disagree."""
