"""Exception hierarchy shared by all eulerlab modules."""


class EulerlabError(Exception):
    pass


class DomainError(EulerlabError, ValueError):
    """Argument outside the region where an evaluator is defined."""


class PoleError(DomainError):
    pass


class BranchGuardError(DomainError):
    """Principal-branch logarithm cannot be trusted at this point."""


class SingularFactorError(EulerlabError, ZeroDivisionError):
    """A product factor 1 - x vanished (or a Leibniz divisor is zero)."""


class DegenerateInputError(EulerlabError, ValueError):
    pass


class ResourceLimitError(EulerlabError, MemoryError):
    """Requested work exceeds the configured memory/enumeration budget."""


class GridResolutionError(DomainError):
    """Probe point too close to 1 for the series cutoff to resolve."""
