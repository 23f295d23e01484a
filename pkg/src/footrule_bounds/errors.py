"""Exception types raised across the package."""


class FootruleError(Exception):
    """Base class for all errors raised by footrule_bounds."""


class DuplicateValue(FootruleError, ValueError):
    """Two observed values in the same coordinate are equal."""

    def __init__(self, coordinate, indices, rows=None):
        self.coordinate = coordinate
        # 1-based, for messages
        self.indices = tuple(sorted(indices))
        self.rows = tuple(rows) if rows is not None else None
        where = (
            f"CSV rows {', '.join(map(str, self.rows))}"
            if self.rows
            else f"indices {', '.join(map(str, self.indices))}"
        )
        super().__init__(f"duplicate observed {coordinate} values at {where}")


class LengthMismatch(FootruleError, ValueError):
    pass


class BadDimension(FootruleError, ValueError):
    pass


class BadRange(FootruleError, ValueError):
    pass


class BadAlpha(FootruleError, ValueError):
    pass


class WrongCase(FootruleError, ValueError):
    """The sample's missing pattern is outside the routine's domain."""


class BudgetExceeded(FootruleError, RuntimeError):
    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"enumeration needs {count} candidates, budget is {budget}")


class AllMissingCoordinate(FootruleError, ValueError):
    pass
