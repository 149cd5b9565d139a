"""Exception types shared across the package.

Two failure families are kept apart on purpose: bad inputs (caller error,
recoverable by fixing the argument or the config file) and broken internal
invariants (bug or numerical breakdown, never the caller's fault). The CLI
maps them to distinct exit codes.
"""


class DomainError(ValueError):
    """An argument or configuration value lies outside its allowed domain."""


class InvariantError(RuntimeError):
    """An internal consistency condition failed during a computation."""
