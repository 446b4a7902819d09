class InputError(ValueError):
    """Malformed input file or violated precondition."""


class CircumferenceError(ValueError):
    """A digraph has a cycle longer than the promised bound."""


class BudgetExceeded(RuntimeError):
    """An enumeration hit its configured limit before finishing.

    ``remaining`` is a lower bound on the work left, when known.
    """

    def __init__(self, message, *, used=None, remaining=None):
        super().__init__(message)
        self.used = used
        self.remaining = remaining


class SimulationFault(RuntimeError):
    """A robber policy asked for a move the rules do not allow."""


class InternalError(AssertionError):
    """A constructed object failed its own consistency check."""
