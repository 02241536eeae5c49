"""Exception types shared across the package."""


class BidError(Exception):
    pass


class ParseError(BidError):
    def __init__(self, message, span=None, expected=()):
        self.span = span
        self.expected = frozenset(expected)
        where = f" at {span.line}:{span.column}" if span is not None else ""
        exp = ""
        if self.expected:
            exp = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{message}{where}{exp}")
        self.message = message


class SortError(ParseError):
    """A number-sorted expression used where a string is required, or vice versa."""


class UnboundVariable(BidError):
    pass


class ResourceLimit(BidError):
    pass


class NotInflationary(BidError):
    def __init__(self, message, step=None, state=None):
        super().__init__(message)
        self.step = step
        self.state = state


class OutOfSpace(BidError):
    pass


class BoundExceeded(BidError):
    pass


class DecodeError(BidError):
    pass


class NotFinal(BidError):
    pass


class MachineFormatError(BidError):
    pass


class NotSigmaZero(BidError):
    """An operator formula quantifies over strings."""
