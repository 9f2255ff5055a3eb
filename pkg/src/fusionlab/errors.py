class FusionLabError(Exception):
    """Base class for all errors raised by fusionlab."""


class GroupTooLarge(FusionLabError):
    def __init__(self, order_seen: int, cap: int, what: str = "group"):
        super().__init__(f"{what} too large: order exceeds cap {cap} (reached {order_seen})")
        self.order_seen = order_seen
        self.cap = cap


class CycleParseError(FusionLabError, ValueError):
    """Malformed cycle notation. ``column`` is 1-based within the parsed text."""

    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column} in {text!r}")
        self.text = text
        self.column = column


class ForeignElementError(FusionLabError, ValueError):
    """An element or subgroup does not live where the operation needs it."""


class NotPGroupError(FusionLabError, ValueError):
    pass


class NotSylowError(FusionLabError, ValueError):
    pass


class IllFormedMorphism(FusionLabError, ValueError):
    pass


class EngineInconsistency(FusionLabError, RuntimeError):
    """Two independent computations of the same quantity disagreed."""
