"""Exception hierarchy shared by all modules."""


class HdlfError(Exception):
    """Base class for library errors."""


class PropertyViolation(HdlfError):
    """A mathematical property that must hold was found to fail."""


class PrecisionExhausted(HdlfError):
    """The truncation is too coarse to decide the requested quantity."""


class BoxExhausted(PrecisionExhausted):
    """A series operation needs a wider truncation box."""


class BoxMismatch(HdlfError):
    pass


class ZeroSeries(HdlfError):
    pass


class NotAPthPower(HdlfError):
    pass


class DimMismatch(HdlfError):
    pass


class ShapeMismatch(HdlfError):
    pass


class EmptySecondSet(HdlfError):
    pass


class NonTerminated(HdlfError):
    pass


class RingLacksPi1(HdlfError):
    pass


class NoCloseRoot(PropertyViolation):
    pass


class DivergentExponent(HdlfError):
    pass


class SchemaError(HdlfError):
    """Malformed JSON input; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
