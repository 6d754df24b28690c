"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class SptPoaError(Exception):
    exit_code = 1


class ValidationError(SptPoaError, ValueError):
    """Malformed instance, schedule, or argument."""

    exit_code = 2


class PreconditionError(ValidationError):
    pass


class DegenerateInstanceError(ValidationError):
    """The optimal social cost is zero, so a cost ratio is undefined."""


class GuardExceededError(SptPoaError):
    """An enumeration would exceed its configured size guard."""

    exit_code = 3


class InvariantViolation(SptPoaError, AssertionError):
    """Two routes that must agree exactly did not."""

    exit_code = 4


class BoundViolation(InvariantViolation):
    """An observed price of anarchy exceeded its proven bound.

    ``instance`` holds the counterexample so callers can dump it.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
