"""Shared exception types."""


class TilingLabError(Exception):
    """Base class for structured errors raised by this library."""


class ParseError(TilingLabError):
    pass


class BudgetExceeded(TilingLabError):
    pass


class PreconditionError(TilingLabError):
    pass
