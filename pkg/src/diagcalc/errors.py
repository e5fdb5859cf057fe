"""Shared exception types."""


class ParseError(ValueError):
    """An input text failed to parse; the message names the offending token."""


class BoundError(ValueError):
    """A requested enumeration exceeds the documented size bound."""
