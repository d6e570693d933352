"""
Errors raised by the field, matrix and permutation layers
"""


class FieldError(ValueError):
    """Bad field parameters: composite p, bad degree, size bound."""


class FormError(ValueError):
    """A matrix or element violates the form it is claimed to respect."""


class CapExceeded(RuntimeError):
    """A domain or enumeration would grow past its configured cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f'{what} of size {size} exceeds cap {cap}')


class ActionError(RuntimeError):
    """An action is inconsistent with the data it was built from."""


class CaseError(ValueError):
    """Unknown stabilizer case, or one that does not apply to this q."""
