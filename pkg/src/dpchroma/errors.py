"""Exception types shared across the package."""


class DpchromaError(Exception):
    """Base class for every error raised by this library."""


class InvalidParameterError(DpchromaError, ValueError):
    """An argument violates a documented precondition."""


class MalformedCoverError(DpchromaError, ValueError):
    """A cover's edge-to-permutation table does not match its base graph."""


class UnsupportedInputError(DpchromaError, ValueError):
    """Structurally valid input outside the supported range (e.g. a disconnected base graph)."""


class InvalidWitnessError(DpchromaError, ValueError):
    """A claimed witness fails its defining property."""


class ResourceLimitError(DpchromaError, RuntimeError):
    """A search exceeded its operation budget.

    ``bracket`` carries the best (lo, hi) interval proven before the budget
    ran out; ``partial`` carries any resumable search state.
    """

    def __init__(self, message, bracket=None, partial=None):
        super().__init__(message)
        self.bracket = bracket
        self.partial = partial
