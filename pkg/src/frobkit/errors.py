"""Exception hierarchy shared by every frobkit module."""


class FrobkitError(Exception):
    """Base class for all library errors."""


class InvalidModulus(FrobkitError):
    pass


class InvalidContext(FrobkitError):
    pass


class ContextMismatch(FrobkitError):
    pass


class InvalidTwist(FrobkitError):
    """Raised for a Frobenius exponent e that is not a positive integer."""


class ExponentOverflow(FrobkitError):
    """An exponent left the signed 64-bit range."""


class BudgetExceeded(FrobkitError):
    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"S-pair budget of {budget} reductions exceeded")


class IllFormedMap(FrobkitError):
    pass


class NotAHomomorphism(IllFormedMap):
    """A source relation does not vanish in the target under the proposed images."""

    def __init__(self, relation, remainder):
        self.relation = relation
        self.remainder = remainder
        super().__init__(
            f"relation {relation} maps to nonzero normal form {remainder}"
        )


class ParseError(FrobkitError):
    kind = "ParseError"

    def __init__(self, message, line=None, column=None, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"{line}:{column}: " if line is not None else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")
