"""
Exception hierarchy shared by every package.

CLI exit codes are derived from these types: DomainError and ConfigError
map to 2, InvariantError to 4.
"""


class CascadeError(Exception):
    """Base class for toolkit errors."""


class DomainError(CascadeError, ValueError):
    """A parameter is outside its valid range (alpha, cost, k, n, ...)."""


class ConfigError(CascadeError):
    """A run configuration or preset is malformed."""

    def __init__(self, message: str, problems: list[str] | None = None):
        super().__init__(message)
        self.problems = list(problems or [])

    def __str__(self) -> str:
        base = super().__str__()
        if not self.problems:
            return base
        return base + ': ' + '; '.join(self.problems)


class StreamOverflowError(CascadeError, IndexError):
    """A draft or verify call reached past the end of the truth stream."""


class InvariantError(CascadeError):
    """A simulation invariant (losslessness, ledger conservation) was violated."""
