"""Exception types for failure modes that callers may want to tell apart."""


class PlacementError(RuntimeError):
    """Cluster placement could not find a disjoint layout within the attempt budget."""


class DegenerateSignalError(ValueError):
    """The clean signal is zero on all retained entries, so an SNR target is undefined."""


class DegenerateTruthError(ValueError):
    """The reference channel is identically zero, so relative MSE is undefined."""
