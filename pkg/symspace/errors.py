"""
Exception hierarchy for symspace.

Library code raises these; the CLI maps them onto exit codes.
"""


class SymspaceError(Exception):
    """Base class for every error raised by the library"""


class InvalidArgumentError(SymspaceError, ValueError):
    """A value outside the domain of an operation (non-finite tau, t <= 0, ...)"""


class ConstraintViolationError(InvalidArgumentError):
    """A parameter combination that breaks a structural constraint (e.g. concavity)"""


class PreconditionViolationError(SymspaceError, ValueError):
    """Parameters outside the hypotheses of the theorem being checked"""


class OutOfScopeError(PreconditionViolationError):
    """Regime not covered by the requested statement; another operation applies"""


class ResourceLimitError(SymspaceError):
    """A configured size cap would be exceeded"""
