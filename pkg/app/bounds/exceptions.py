"""
Errors raised by the class tables and the bound ledgers
"""


class PreconditionError(ValueError):
    """Parameters fall outside the regime a formula is stated for."""


class Discrepancy(AssertionError):
    """A tabulated value disagrees with the value found by enumeration."""

    def __init__(self, label, formula, computed):
        self.label = label
        self.formula = formula
        self.computed = computed
        super().__init__(
            f'{label}: formula gives {formula}, enumeration gives {computed}'
        )
