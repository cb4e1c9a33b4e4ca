"""Exception hierarchy shared by the library and the CLI exit codes."""


class DijoinLatError(Exception):
    exit_code = 1


class InvalidInput(DijoinLatError, ValueError):
    """Malformed instance or structurally invalid object (exit code 2)."""

    exit_code = 2


class PreconditionError(DijoinLatError, ValueError):
    """A well-formed input that does not meet an operation's hypotheses (exit code 3)."""

    exit_code = 3


class TheoremViolation(DijoinLatError):
    """A construction that the theory guarantees has failed (exit code 4).

    ``instance`` optionally carries a serializable dump of the falsifying input.
    """

    exit_code = 4

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class InvariantError(TheoremViolation):
    """An internal prediction (dimension count, slack, active sources) did not hold."""
