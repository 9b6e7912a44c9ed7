"""Exception hierarchy for the workbench.

Errors are split by who is at fault: ``ParseError``/``ValidationError`` mean
the input document or argument was malformed (a usage problem), while
``PreconditionError`` and ``InfeasibleError`` mean a well-formed request has
no answer in the given domain (a domain problem).  The CLI maps the former to
exit code 2 and the latter to exit code 1.
"""

from __future__ import annotations


class XfairError(Exception):
    """Base class for all workbench errors."""


class ParseError(XfairError):
    """Malformed input text (JSON documents, bit strings, formulas)."""


class ValidationError(XfairError):
    """Well-formed input that violates a structural constraint."""


class PreconditionError(XfairError):
    """An operation was invoked outside its stated domain."""


class InfeasibleError(XfairError):
    """No object satisfying the request exists within the search radius."""

    def __init__(self, message: str, constraint: str | None = None) -> None:
        super().__init__(message)
        self.constraint = constraint
