"""Exception hierarchy.

Each class carries the CLI exit code it maps to, so the command line layer
can translate failures without a lookup table.
"""


class TPSError(Exception):
    exit_code = 3


class InvalidSpace(TPSError):
    """Malformed space: unknown points, not a topology, not a preorder."""

    exit_code = 3


class TooLarge(TPSError):
    exit_code = 3


class InvalidInput(TPSError):
    """A precondition on subsets or functions was violated."""

    exit_code = 3


class NotSeparable(TPSError):
    exit_code = 4


class NotApplicable(TPSError):
    """The space lacks the property an operation needs (e.g. regularity)."""

    exit_code = 4


class ConditionViolated(TPSError):
    """The extension condition fails.

    ``xi`` and ``xi_prime`` are the two threshold values and ``point`` lies in
    both the closed decreasing hull of ``f <= xi`` and the closed increasing
    hull of ``f >= xi_prime``.
    """

    exit_code = 5

    def __init__(self, message, xi=None, xi_prime=None, point=None):
        super().__init__(message)
        self.xi = xi
        self.xi_prime = xi_prime
        self.point = point


class InternalError(TPSError):
    exit_code = 6


class ParseError(TPSError):
    """Input file is not well-formed JSON of the expected shape."""

    exit_code = 2


class NotFound(TPSError):
    exit_code = 1
