"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """An iteration cap was hit; the input is degenerate or there is a bug."""


class AlgorithmError(AssertionError):
    """An internal invariant promised by the construction did not hold."""
