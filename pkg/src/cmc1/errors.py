"""Exception hierarchy shared by every module of the package."""


class Cmc1Error(Exception):
    """Base class for all errors raised by cmc1."""


class ParseError(Cmc1Error, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the UTF-8 source where parsing
    stopped; ``expected`` is the set of tokens that would have been
    accepted there (empty for identifier errors).
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifier(ParseError):
    pass


class UnknownFunction(ParseError):
    pass


class DomainError(Cmc1Error, ArithmeticError):
    """An expression node was evaluated at a pole or on a branch cut."""


class ZeroDerivative(DomainError):
    """f'(tau) vanishes (to 1e-14), so the construction is undefined."""


class DegenerateChart(Cmc1Error, ArithmeticError):
    """The tangent vectors of a parametrization are (numerically) parallel."""


class NoRealEnvelope(Cmc1Error, ArithmeticError):
    """The squared gradient of the radius exceeds one."""


class EmptyGrid(Cmc1Error):
    """No usable nodes remain on a surface grid."""


class BoundaryNode(Cmc1Error, IndexError):
    """A finite-difference stencil would leave the grid or touch a hole."""


class VerticalEscape(Cmc1Error, ArithmeticError):
    """The normal geodesic leaves the half-space model through infinity."""


class InvalidMatrix(Cmc1Error, ArithmeticError):
    """A null-curve matrix whose bottom row cannot be projected."""
