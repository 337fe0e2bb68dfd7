"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Two vector-valued arguments disagree on dimension."""


class InvalidGameError(ValueError):
    """A game graph violates its structural invariants.

    Carries the full list of violations found by ``GameGraph.validate``.
    """

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class GameFileError(ValueError):
    """A game or instance file cannot be parsed."""


class IterationCapExceeded(RuntimeError):
    """The solver hit its safety cap before reaching a fixed point.

    Keeps the last two front maps so the divergence can be inspected.
    """

    def __init__(self, cap: int, previous, current):
        super().__init__(f"no fixed point within {cap} iterations")
        self.cap = cap
        self.previous = previous
        self.current = current


class OracleCapacityError(RuntimeError):
    """The brute-force oracle exceeded its configuration budget."""


class StrategyError(RuntimeError):
    """A solved game offered no consistent move; indicates a broken fixed point."""
