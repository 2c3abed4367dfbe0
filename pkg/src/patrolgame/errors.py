"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant."""


class FormatError(ValidationError):
    """A text file failed to parse; message carries the line number."""


class SizeGuardError(RuntimeError):
    """A combinatorial operation refused an input above its size guard."""


class FactorizationError(ValidationError):
    """A factorization failed validation; `violations` lists each failure."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
