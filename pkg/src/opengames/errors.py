"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for every error the engine raises deliberately."""


class TypeMismatch(EngineError):
    """Two boundaries (or table shapes) that must agree do not."""


class SizeGuardExceeded(EngineError):
    """An enumeration would exceed the configured size cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} items exceeds the size cap of {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class EmptyPayoffOrder(EngineError):
    """argmax needs a nonempty payoff order when the choice set is nonempty."""


class UnknownName(EngineError):
    """Reference to an undeclared set, function, selection, or game."""
