"""Exception types."""


class UsageError(ValueError):
    """Bad arguments: out-of-range subsystem index, wrong subsystem count, ..."""


class DimensionError(ValueError):
    """Total dimension exceeds the configured maximum or shapes disagree."""


class InvalidStateError(ValueError):
    """Matrix or vector fails the state invariants (Hermitian, PSD, unit trace)."""


class NumericError(ArithmeticError):
    def __init__(self, message, asymmetry=None):
        super().__init__(message)
        self.asymmetry = asymmetry


class ConsistencyError(RuntimeError):
    """Two verdicts contradict an implication edge.

    Signals a bug or a tolerance failure, never a property of the input.
    """

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second
