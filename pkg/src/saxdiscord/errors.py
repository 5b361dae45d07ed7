"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ParameterError`` (and its subclass
``InfeasibleInputError``) exits with 2, ``ValidationError`` with 3.
"""


class DiscordError(Exception):
    """Base class for all errors raised by saxdiscord."""


class ParameterError(DiscordError, ValueError):
    """A numeric parameter violates a precondition (n, word_len, threads, ...)."""


class InfeasibleInputError(ParameterError):
    """No subsequence of the series has a non-self match for the requested length."""


class ValidationError(DiscordError, ValueError):
    """Input data is malformed: unparsable, empty or non-finite."""
