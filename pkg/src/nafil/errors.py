"""Exception hierarchy. Everything derives from LoopError (a ValueError)."""


class LoopError(ValueError):
    pass


class BadDimensions(LoopError):
    pass


class OutOfRange(LoopError):
    pass


class NotLatin(LoopError):
    """Duplicate symbol in a row or column; ``axis`` is "row" or "column", ``index`` 1-based."""

    def __init__(self, axis: str, index: int, value: int):
        self.axis = axis
        self.index = index
        self.value = value
        super().__init__(f"{axis} {index} repeats the value {value}")


class NoIdentity(LoopError):
    pass


class NotNormal(LoopError):
    pass


class NotInvertible(LoopError):
    pass


class EmptySequence(LoopError):
    pass


class InverseUnavailable(LoopError):
    pass


class MixedOrders(LoopError):
    pass


class CeilingExceeded(LoopError):
    pass


class NotFound(LoopError):
    pass


class UnknownName(LoopError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class ParseError(LoopError):
    """Malformed table document; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class BadDocumentDimensions(ParseError, BadDimensions):
    pass


class IdentityError(LoopError):
    pass


class IdentitySyntaxError(IdentityError):
    def __init__(self, message: str, position: int, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"at position {position}: {message}{detail}")


class AmbiguousProduct(IdentitySyntaxError):
    pass


class EmptySide(IdentitySyntaxError):
    pass


class TooManyVariables(IdentityError):
    pass
