class CircuitError(ValueError):
    """Malformed circuit text; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message, line=0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class TableauInvariantError(RuntimeError):
    """The tableau no longer encodes a valid stabilizer/destabilizer set."""


class SymbolCapacityError(TableauInvariantError):
    """More symbols were requested than the pre-pass reserved."""


class OrientationError(RuntimeError):
    """A row or column operation was issued in the wrong tile orientation."""
