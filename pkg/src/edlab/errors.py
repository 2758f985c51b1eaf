"""Shared exception types with CLI exit-code semantics."""


class ContractViolation(ValueError):
    """Input violates a documented precondition or format contract (exit 2)."""


class SizeLimitExceeded(ValueError):
    """Input exceeds a configured exact-computation cap (exit 3)."""

    def __init__(self, message, *, cap_name, limit, actual):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"{message} ({cap_name} cap: limit {limit}, got {actual})")
