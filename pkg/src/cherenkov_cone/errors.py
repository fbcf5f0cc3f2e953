"""Exception types shared across the package.

Two failure families matter downstream: bad inputs (caller error, CLI exit
code 2) and legitimate numerical outcomes like "no pole on this plane"
(CLI exit code 3). Keeping them distinct lets scripts branch on the cause.
"""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition or schema."""


class NumericalError(RuntimeError):
    """Raised when a computation has no valid result (no pole, degenerate
    geometry, singular denominator), as opposed to a malformed request."""
