"""Exception types shared across the package."""


class LowRankSvpError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(LowRankSvpError):
    """An input violates a documented precondition (shape, sign, finiteness)."""


class NotPositiveDefiniteError(LowRankSvpError):
    """The Gram matrix could not be certified positive definite."""


class BudgetExceededError(LowRankSvpError):
    """An enumeration would exceed its evaluation budget."""

    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} evaluations, budget is {budget}"
        )


class DocumentError(LowRankSvpError):
    """An instance or result document failed to parse or validate."""
