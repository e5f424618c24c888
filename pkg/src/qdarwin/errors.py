"""Exception types shared across the package."""


class NumericalConsistencyError(RuntimeError):
    """An internal numerical invariant failed (e.g. a reduced state is not PSD)."""
