"""Exception types shared across the package."""


class PolygonOddsError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidInventory(PolygonOddsError, ValueError):
    """A list of lengths is unusable (too short, non-positive, non-finite)."""


class InvalidParams(PolygonOddsError, ValueError):
    """Problem parameters are out of range."""


class NotPolygonal(PolygonOddsError):
    """The lengths cannot be the sides of a polygon.

    ``index`` is the 0-based position of the (unique) offending length.
    """

    def __init__(self, index: int, lengths=()):
        self.index = index
        self.lengths = tuple(lengths)
        super().__init__(
            f"not polygonal: piece {index} (length {self.lengths[index] if self.lengths else '?'}) "
            "is at least half the total"
        )


class BudgetExceeded(PolygonOddsError):
    """An exhaustive enumeration would visit more outcomes than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} outcomes, budget is {budget} "
            "(raise it with --budget or POLYGON_ODDS_BUDGET)"
        )
