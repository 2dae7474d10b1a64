"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class HahnError(Exception):
    """Base class for all library errors."""


class UsageError(HahnError, ValueError):
    """Bad arguments: mismatched kinds, violated preconditions, unknown options."""


class ParseError(UsageError):
    """Malformed literal or formula text.

    ``pos`` is the 0-based character offset where the problem was detected.
    """

    def __init__(self, message, text="", pos=0):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} (at column {pos + 1})")

    def annotated(self):
        """The offending text with a caret under the error column."""
        if not self.text:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


class SortError(ParseError):
    """An element variable used where a set variable is required, or vice versa."""


class BoundError(UsageError):
    """An argument lies outside the bounded domain, or the bound is inadequate."""


class StrategyError(UsageError):
    """The least-fixed-point strategy was requested for a non-Horn set quantifier."""


class OverflowGuardError(HahnError):
    """A prime tower would exceed the configured bit budget."""
